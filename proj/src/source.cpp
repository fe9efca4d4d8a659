#include "slopeflow/source.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace slopeflow {

double Polynomial::eval(double x) const {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    return v;
}

Polynomial Polynomial::derivative() const {
    Polynomial d;
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        d.coeffs.push_back(static_cast<double>(k) * coeffs[k]);
    return d;
}

Polynomial Polynomial::antiderivative() const {
    Polynomial a;
    a.coeffs.assign(coeffs.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        a.coeffs[k + 1] = coeffs[k] / static_cast<double>(k + 1);
    return a;
}

double Polynomial::integrate(double a, double b) const {
    const Polynomial F = antiderivative();
    return F.eval(b) - F.eval(a);
}

namespace {

// Bisection for a sign change of q on [lo, hi].
double bisect_root(const Polynomial& q, double lo, double hi) {
    double flo = q.eval(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = q.eval(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> Polynomial::roots_in(double a, double b) const {
    std::vector<double> nontrivial;
    for (double c : coeffs) {
        if (c != 0.0) {
            nontrivial.push_back(c);
        }
    }
    std::vector<double> out;
    if (degree() < 1 || nontrivial.empty()) return out;  // constant: no isolated roots
    // Monotone segments between critical points; one sign change each.
    std::vector<double> knots{a};
    if (degree() > 1) {
        for (double r : derivative().roots_in(a, b)) knots.push_back(r);
    }
    knots.push_back(b);
    std::sort(knots.begin(), knots.end());
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double lo = knots[i], hi = knots[i + 1];
        if (hi - lo <= 0.0) continue;
        const double flo = eval(lo), fhi = eval(hi);
        if (flo == 0.0) out.push_back(lo);
        if ((flo < 0.0) != (fhi < 0.0) && flo != 0.0 && fhi != 0.0)
            out.push_back(bisect_root(*this, lo, hi));
    }
    if (eval(b) == 0.0) out.push_back(b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-14; }),
              out.end());
    return out;
}

SourceFunction::SourceFunction() : SourceFunction(std::vector<SourcePiece>{}) {}

SourceFunction::SourceFunction(std::vector<SourcePiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) {
        pieces_.push_back({-1.0, 1.0, Polynomial{{0.0}}});
    }
    std::sort(pieces_.begin(), pieces_.end(),
              [](const SourcePiece& a, const SourcePiece& b) { return a.lo < b.lo; });
    const double eps = 1e-12;
    if (std::abs(pieces_.front().lo + 1.0) > eps || std::abs(pieces_.back().hi - 1.0) > eps)
        throw std::invalid_argument("SourceFunction: pieces must span [-1,1]");
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
        if (std::abs(pieces_[i].hi - pieces_[i + 1].lo) > eps)
            throw std::invalid_argument("SourceFunction: pieces must partition [-1,1]");
    }
    for (const auto& p : pieces_) {
        if (p.hi <= p.lo) throw std::invalid_argument("SourceFunction: empty piece");
    }
}

SourceFunction SourceFunction::constant(double c) {
    return SourceFunction({{-1.0, 1.0, Polynomial{{c}}}});
}

SourceFunction SourceFunction::polynomial(std::vector<double> coeffs) {
    return SourceFunction({{-1.0, 1.0, Polynomial{std::move(coeffs)}}});
}

double SourceFunction::eval(double x) const {
    if (x < -1.0 || x > 1.0) throw std::domain_error("SourceFunction: x outside [-1,1]");
    for (const auto& p : pieces_) {
        if (x <= p.hi || &p == &pieces_.back()) return p.poly.eval(x);
    }
    return pieces_.back().poly.eval(x);
}

double SourceFunction::integral(double a, double b) const {
    if (a > b) return -integral(b, a);
    double s = 0.0;
    for (const auto& p : pieces_) {
        const double lo = std::max(a, p.lo), hi = std::min(b, p.hi);
        if (hi > lo) s += p.poly.integrate(lo, hi);
    }
    return s;
}

double SourceFunction::tail(double x) const {
    if (x < -1.0 - 1e-12 || x > 1.0 + 1e-12)
        throw std::domain_error("SourceFunction::tail: x outside [-1,1]");
    return integral(std::clamp(x, -1.0, 1.0), 1.0);
}

double SourceFunction::l1_norm() const {
    double s = 0.0;
    for (const auto& p : pieces_) {
        std::vector<double> cuts{p.lo};
        for (double r : p.poly.roots_in(p.lo, p.hi)) cuts.push_back(r);
        cuts.push_back(p.hi);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            if (cuts[i + 1] <= cuts[i]) continue;
            s += std::abs(p.poly.integrate(cuts[i], cuts[i + 1]));
        }
    }
    return s;
}

bool SourceFunction::is_nonnegative() const {
    for (const auto& p : pieces_) {
        // Check endpoints, critical points, and sign-change roots.
        std::vector<double> probes{p.lo, p.hi};
        if (p.poly.degree() > 0) {
            for (double r : p.poly.derivative().roots_in(p.lo, p.hi)) probes.push_back(r);
        }
        for (double x : probes) {
            if (p.poly.eval(x) < -1e-14) return false;
        }
    }
    return true;
}

bool SourceFunction::is_zero() const {
    for (const auto& p : pieces_) {
        for (double c : p.poly.coeffs) {
            if (c != 0.0) return false;
        }
    }
    return true;
}

double SourceFunction::integral_against(const Polynomial& q, double a, double b) const {
    if (a > b) return -integral_against(q, b, a);
    double s = 0.0;
    for (const auto& p : pieces_) {
        const double lo = std::max(a, p.lo), hi = std::min(b, p.hi);
        if (hi <= lo) continue;
        // Product polynomial, integrated exactly.
        Polynomial prod;
        prod.coeffs.assign(p.poly.coeffs.size() + q.coeffs.size() - 1, 0.0);
        for (std::size_t i = 0; i < p.poly.coeffs.size(); ++i)
            for (std::size_t j = 0; j < q.coeffs.size(); ++j)
                prod.coeffs[i + j] += p.poly.coeffs[i] * q.coeffs[j];
        s += prod.integrate(lo, hi);
    }
    return s;
}

std::string SourceFunction::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : pieces_) {
        arr.push_back({{"interval", {p.lo, p.hi}}, {"coeffs", p.poly.coeffs}});
    }
    return arr.dump();
}

SourceFunction SourceFunction::from_json(const std::string& text) {
    const auto arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw std::invalid_argument("SourceFunction: expected JSON array");
    std::vector<SourcePiece> pieces;
    for (const auto& item : arr) {
        SourcePiece p;
        p.lo = item.at("interval").at(0).get<double>();
        p.hi = item.at("interval").at(1).get<double>();
        p.poly.coeffs = item.at("coeffs").get<std::vector<double>>();
        pieces.push_back(std::move(p));
    }
    return SourceFunction(std::move(pieces));
}

}  // namespace slopeflow
