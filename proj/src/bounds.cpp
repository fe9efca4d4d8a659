#include "slopeflow/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

#include "slopeflow/power.hpp"

namespace slopeflow {

namespace {

constexpr double kVerdictBand = 1e-10;

// Objective of the double minimum, outer integral by composite Simpson
// over n panels of [x, 1]. The inner integral is exact.
double hf_objective(const ProblemSpec& spec, double x0, double x, int panels) {
    const double coef = spec.p / ((spec.p - 1.0) * std::cos(spec.phi));
    const double head = std::pow(spec.H, spec.conj_p());
    const double pc = spec.conj_p();
    const double tail_x0 = spec.source.tail(x0);
    auto integrand = [&](double tau) {
        // int_{x0}^{tau} f = tail(x0) - tail(tau)
        return phi_pow(pc, tail_x0 - spec.source.tail(tau));
    };
    double acc = 0.0;
    const double h = (1.0 - x) / panels;
    if (h > 0.0) {
        for (int i = 0; i < panels; ++i) {
            const double a = x + i * h, b = a + h;
            acc += h / 6.0 * (integrand(a) + 4.0 * integrand(0.5 * (a + b)) + integrand(b));
        }
    }
    return head + coef * acc;
}

// Golden-section minimization of a 1D function on [lo, hi].
template <typename F>
std::pair<double, double> golden_min(F f, double lo, double hi, int iters = 60) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters && b - a > 1e-13; ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a); fd = f(d);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

}  // namespace

HfResult check_hf(const ProblemSpec& spec, int resolution) {
    return check_hf(spec, resolution, true);
}

HfResult check_hf(const ProblemSpec& spec, int resolution, bool allow_fast_path) {
    spec.validate();
    if (resolution < 64) throw std::invalid_argument("check_hf: resolution too small");

    HfResult res;
    if (allow_fast_path && spec.source.is_nonnegative()) {
        res.verdict = HfVerdict::Holds;
        res.fast_path = true;
        res.min_value = std::pow(spec.H, spec.conj_p());
        res.argmin_x0 = -1.0;
        res.argmin_x = -1.0;
        return res;
    }

    const int m = resolution;
    const double coef = spec.p / ((spec.p - 1.0) * std::cos(spec.phi));
    const double head = std::pow(spec.H, spec.conj_p());
    const double pc = spec.conj_p();

    // Node and midpoint tails, shared by all x0.
    std::vector<double> node(m + 1), tail_node(m + 1), tail_mid(m);
    for (int i = 0; i <= m; ++i) {
        node[i] = -1.0 + 2.0 * i / m;
        tail_node[i] = spec.source.tail(node[i]);
    }
    for (int i = 0; i < m; ++i) tail_mid[i] = spec.source.tail(0.5 * (node[i] + node[i + 1]));

    double best = std::numeric_limits<double>::infinity();
    int best_i0 = 0, best_j = 0;
    const double h = 2.0 / m;
    for (int i0 = 0; i0 <= m; ++i0) {
        const double t0 = tail_node[i0];
        // Cumulative Simpson of phi_pow(p', t0 - tail(tau)) from x back to 1.
        double cum = 0.0;  // int_{node[j]}^{1}
        double obj = head; // at x = 1 the integral vanishes
        if (obj < best) { best = obj; best_i0 = i0; best_j = m; }
        for (int j = m - 1; j >= i0; --j) {
            const double fa = phi_pow(pc, t0 - tail_node[j]);
            const double fm = phi_pow(pc, t0 - tail_mid[j]);
            const double fb = phi_pow(pc, t0 - tail_node[j + 1]);
            cum += h / 6.0 * (fa + 4.0 * fm + fb);
            obj = head + coef * cum;
            if (obj < best) { best = obj; best_i0 = i0; best_j = j; }
        }
    }

    // Local refinement around the discrete argmin by coordinate descent.
    double x0 = node[best_i0], x = node[best_j];
    double val = best;
    const int panels = std::max(64, m / 2);
    for (int pass = 0; pass < 3; ++pass) {
        const double lo_x = std::max(x0, x - h), hi_x = std::min(1.0, x + h);
        auto [rx, rv] = golden_min([&](double t) { return hf_objective(spec, x0, t, panels); },
                                   lo_x, hi_x);
        if (rv < val) { val = rv; x = rx; }
        const double lo_0 = std::max(-1.0, x0 - h), hi_0 = std::min(x, x0 + h);
        auto [r0, rv0] = golden_min([&](double t) { return hf_objective(spec, t, x, panels); },
                                    lo_0, hi_0);
        if (rv0 < val) { val = rv0; x0 = r0; }
    }

    res.min_value = val;
    res.argmin_x0 = x0;
    res.argmin_x = x;
    if (std::abs(val) <= kVerdictBand) {
        res.verdict = HfVerdict::Indeterminate;
    } else {
        res.verdict = val > 0.0 ? HfVerdict::Holds : HfVerdict::Fails;
    }
    return res;
}

double sup_norm_bound(const ProblemSpec& spec) {
    return spec.source.l1_norm() / spec.lambda();
}

bool existence_condition(const ProblemSpec& spec) {
    return spec.source.l1_norm() < spec.H * spec.lambda();
}

double diffusion_floor(const ProblemSpec& spec) {
    if (spec.p <= 2.0) throw std::domain_error("diffusion_floor: requires p > 2");
    const double base = spec.sin_phi_pow(spec.p - 2.0) * std::cos(spec.phi);
    if (spec.source.is_nonnegative()) return 0.5 * spec.H * base;
    if (!existence_condition(spec))
        throw std::domain_error("diffusion_floor: needs f >= 0 or the smallness condition");
    const double deficit = spec.H - spec.source.l1_norm() / spec.lambda();
    return 0.5 * deficit * base;
}

DerivativeBounds derivative_bounds(const ProblemSpec& spec, const SolutionProfile& profile,
                                   std::optional<double> beta_opt) {
    if (spec.p <= 2.0) throw std::domain_error("derivative_bounds: requires p > 2");
    const double f1 = spec.source.l1_norm();
    const double beta = beta_opt.value_or(f1);
    const double cphi = std::cos(spec.phi);
    const double sp2 = spec.sin_phi_pow(spec.p - 2.0);

    DerivativeBounds b;
    const double end_base = f1 / (spec.H * sp2 * cphi);
    b.end_bound = profile.s_end >= 0.0 ? end_base : 2.0 * end_base;

    // Uniform bound through the beta-uniform diffusion floor and the
    // explicit bound on D(1); unavailable (infinite) when beta reaches the
    // smallness threshold H (sin phi)^(p-1).
    if (beta >= spec.H * spec.lambda()) {
        b.uniform_bound = std::numeric_limits<double>::infinity();
        return b;
    }
    const double k_prime_beta = 0.5 * (spec.H - beta / spec.lambda()) * sp2 * cphi;
    const double pow_max = std::max(1.0, std::pow(2.0, spec.p - 1.0));
    const double c_prime = (spec.p - 1.0) * spec.H * pow_max * cphi * sp2 +
                           2.0 * pow_max * std::pow(cphi, spec.p - 2.0) / sp2 * beta;
    b.uniform_bound = 2.0 / k_prime_beta * (1.0 + c_prime / (spec.H * cphi * sp2)) * f1;
    return b;
}

std::string BoundsReport::to_json() const {
    nlohmann::json j{{"hf_holds", hf_holds},
                     {"hf_min_value", hf_min_value},
                     {"hf_argmin_x0", hf_argmin_x0},
                     {"hf_argmin_x", hf_argmin_x},
                     {"sup_bound", sup_bound},
                     {"existence_ok", existence_ok},
                     {"margin_beta", margin_beta},
                     {"K_prime", K_prime},
                     {"du_end_bound", du_end_bound},
                     {"du_uniform_bound", du_uniform_bound}};
    return j.dump(2);
}

BoundsReport bounds_report(const ProblemSpec& spec, const SolutionProfile& profile,
                           std::optional<double> beta) {
    BoundsReport r;
    const HfResult hf = check_hf(spec);
    r.hf_holds = hf.holds();
    r.hf_min_value = hf.min_value;
    r.hf_argmin_x0 = hf.argmin_x0;
    r.hf_argmin_x = hf.argmin_x;
    r.sup_bound = sup_norm_bound(spec);
    r.existence_ok = existence_condition(spec);
    r.margin_beta = beta.value_or(spec.source.l1_norm());
    if (spec.p > 2.0) {
        if (spec.source.is_nonnegative() || r.existence_ok) r.K_prime = diffusion_floor(spec);
        const DerivativeBounds db = derivative_bounds(spec, profile, beta);
        r.du_end_bound = db.end_bound;
        r.du_uniform_bound = db.uniform_bound;
    }
    return r;
}

}  // namespace slopeflow
