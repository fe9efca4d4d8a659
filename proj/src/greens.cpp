#include "slopeflow/greens.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "slopeflow/linearize.hpp"

namespace slopeflow {

namespace {

constexpr int kMaxNodes = 4608;  // leaves room for graded-patch grids

// Cumulative trapezoid of lambda/D from -1; exact for piecewise-linear D.
std::vector<double> cumulative_drift(const Grid& grid, const std::vector<double>& D,
                                     double lambda) {
    std::vector<double> I(grid.nodes.size(), 0.0);
    for (std::size_t i = 1; i < grid.nodes.size(); ++i) {
        const double h = grid.nodes[i] - grid.nodes[i - 1];
        I[i] = I[i - 1] + 0.5 * h * (lambda / D[i - 1] + lambda / D[i]);
    }
    return I;
}

// Weights at an arbitrary point, trapezoid-consistent with the node values:
// inside a cell the partial integral uses the linearly interpolated D.
struct WeightEval {
    const GreensTable& t;
    std::vector<double> I;
    double I_total;

    explicit WeightEval(const GreensTable& table)
        : t(table),
          I(cumulative_drift(table.grid, table.D, table.lambda)),
          I_total(I.back()) {}

    double integral_at(double s) const {
        const auto& x = t.grid.nodes;
        if (s <= x.front()) return 0.0;
        if (s >= x.back()) return I_total;
        const auto it = std::upper_bound(x.begin(), x.end(), s);
        const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        const double h = x[i + 1] - x[i];
        const double theta = (s - x[i]) / h;
        const double Ds = t.D[i] + theta * (t.D[i + 1] - t.D[i]);
        return I[i] + 0.5 * (s - x[i]) * (t.lambda / t.D[i] + t.lambda / Ds);
    }

    double e_minus(double s) const { return std::exp(-integral_at(s)); }
    double e_plus(double s) const { return std::exp(I_total - integral_at(s)); }
};

double branch(double em_x, double ep_x, double em_y, double ep_y, double lambda, bool x_le_y) {
    const double denom = lambda * (em_y - ep_y);  // negative inside the interval
    if (x_le_y) return (ep_y - 1.0) / denom * (em_x - 1.0);
    return (em_y - 1.0) / denom * (ep_x - 1.0);
}

std::uint64_t fnv1a(const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> exp_weights(const DiffusionProfile& D,
                                                                double lambda) {
    D.grid.validate();
    if (lambda <= 0.0) throw std::invalid_argument("exp_weights: lambda must be positive");
    if (D.D.size() != D.grid.nodes.size())
        throw std::invalid_argument("exp_weights: D size mismatch");
    for (double v : D.D)
        if (v <= 0.0) throw std::invalid_argument("exp_weights: D must be positive");

    const std::vector<double> I = cumulative_drift(D.grid, D.D, lambda);
    std::vector<double> em(I.size()), ep(I.size());
    for (std::size_t i = 0; i < I.size(); ++i) {
        em[i] = std::exp(-I[i]);
        ep[i] = std::exp(I.back() - I[i]);
    }
    return {em, ep};
}

GreensTable build_greens(const DiffusionProfile& D, double lambda) {
    if (static_cast<int>(D.grid.nodes.size()) > kMaxNodes)
        throw std::invalid_argument("build_greens: grid too large for a dense table");
    GreensTable table;
    table.grid = D.grid;
    table.D = D.D;
    table.lambda = lambda;
    auto [em, ep] = exp_weights(D, lambda);
    table.E_minus = std::move(em);
    table.E_plus = std::move(ep);

    const int n = table.n_nodes();
    table.G.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            table.G[static_cast<std::size_t>(i) * n + j] =
                branch(table.E_minus[i], table.E_plus[i], table.E_minus[j], table.E_plus[j],
                       lambda, i <= j);
    return table;
}

double green_eval(const GreensTable& table, double x, double y) {
    if (x < -1.0 || x > 1.0 || y < -1.0 || y > 1.0)
        throw std::out_of_range("green_eval: arguments must lie in [-1,1]");
    const WeightEval w(table);
    return branch(w.e_minus(x), w.e_plus(x), w.e_minus(y), w.e_plus(y), table.lambda, x <= y);
}

std::pair<double, std::pair<double, double>> positivity_scan(const GreensTable& table) {
    const int n = table.n_nodes();
    double best = std::numeric_limits<double>::infinity();
    int bi = 1, bj = 1;
    for (int i = 1; i < n - 1; ++i)
        for (int j = 1; j < n - 1; ++j)
            if (table.g(i, j) < best) {
                best = table.g(i, j);
                bi = i;
                bj = j;
            }
    return {best, {table.grid.nodes[bi], table.grid.nodes[bj]}};
}

double lipschitz_estimate(const GreensTable& table) {
    // dG/dx on the x <= y branch is the y coefficient times E_minus'(x)
    // with E_minus' = -lambda E_minus / D, and symmetrically for x > y.
    const int n = table.n_nodes();
    double kappa = 0.0;
    for (int j = 0; j < n; ++j) {
        const double denom = table.E_minus[j] - table.E_plus[j];
        if (denom == 0.0) continue;  // only at the endpoints where both coefs vanish
        const double coef_lo = (table.E_plus[j] - 1.0) / denom;   // x <= y
        const double coef_hi = (table.E_minus[j] - 1.0) / denom;  // x > y
        for (int i = 0; i < n; ++i) {
            if (i <= j) {
                kappa = std::max(kappa,
                                 std::abs(coef_lo) * table.E_minus[i] / table.D[i]);
            }
            if (i >= j) {
                kappa = std::max(kappa,
                                 std::abs(coef_hi) * table.E_plus[i] / table.D[i]);
            }
        }
    }
    return kappa;
}

SolutionProfile green_solve(const GreensTable& table, const SourceFunction& f) {
    const WeightEval w(table);
    const int n = table.n_nodes() - 1;
    const auto& x = table.grid.nodes;

    SolutionProfile out;
    out.grid = table.grid;
    out.u.assign(n + 1, 0.0);
    out.du.assign(n + 1, 0.0);

    // Quadrature panels: grid cells further split at the source's piece
    // boundaries, so the integrand is smooth on every panel. The diagonal
    // kink y = x_i always falls on a cell edge because x_i is a node.
    for (int i = 1; i < n; ++i) {
        const double em_x = table.E_minus[i], ep_x = table.E_plus[i];
        double acc = 0.0;
        for (int c = 0; c < n; ++c) {
            for (const auto& piece : f.pieces()) {
                const double a = std::max(x[c], piece.lo);
                const double b = std::min(x[c + 1], piece.hi);
                if (b <= a) continue;
                auto g_times_f = [&](double y) {
                    return branch(em_x, ep_x, w.e_minus(y), w.e_plus(y), table.lambda,
                                  x[i] <= y) *
                           piece.poly.eval(y);
                };
                const double mid = 0.5 * (a + b);
                acc += (b - a) / 6.0 *
                       (g_times_f(a) + 4.0 * g_times_f(mid) + g_times_f(b));
            }
        }
        out.u[i] = acc;
    }

    // Second-order three-point derivatives, valid on nonuniform grids.
    for (int i = 1; i < n; ++i) {
        const double h1 = x[i] - x[i - 1], h2 = x[i + 1] - x[i];
        out.du[i] = -h2 / (h1 * (h1 + h2)) * out.u[i - 1] +
                    (h2 - h1) / (h1 * h2) * out.u[i] +
                    h1 / (h2 * (h1 + h2)) * out.u[i + 1];
    }
    {
        const double h1 = x[1] - x[0], h2 = x[2] - x[1];
        out.du[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * out.u[0] +
                    (h1 + h2) / (h1 * h2) * out.u[1] - h1 / (h2 * (h1 + h2)) * out.u[2];
    }
    {
        const double h1 = x[n] - x[n - 1], h2 = x[n - 1] - x[n - 2];
        out.du[n] = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * out.u[n] -
                    (h1 + h2) / (h1 * h2) * out.u[n - 1] +
                    h1 / (h2 * (h1 + h2)) * out.u[n - 2];
    }
    out.s_end = out.du[n];
    return out;
}

double fixed_point_check(const ProblemSpec& spec, const SolutionProfile& profile) {
    const DiffusionProfile D = build_diffusion(spec, profile);
    const GreensTable table = build_greens(D, spec.lambda());
    const SolutionProfile lin = green_solve(table, spec.source);
    double worst = 0.0;
    for (std::size_t i = 0; i < profile.u.size(); ++i)
        worst = std::max(worst, std::abs(lin.u[i] - profile.u[i]));
    return worst;
}

std::string dump_matrix(const GreensTable& table) {
    std::string out(table.G.size() * sizeof(double), '\0');
    std::memcpy(out.data(), table.G.data(), out.size());
    return out;
}

std::string header_json(const GreensTable& table) {
    std::ostringstream hash;
    hash << std::hex
         << fnv1a(table.grid.nodes.data(), table.grid.nodes.size() * sizeof(double));
    nlohmann::json j{{"n", table.n_nodes()}, {"lambda", table.lambda},
                     {"grid_hash", hash.str()}};
    return j.dump(2);
}

std::string weights_csv(const GreensTable& table) {
    std::ostringstream os;
    os << "x,E_minus,E_plus\n";
    os.precision(17);
    for (int i = 0; i < table.n_nodes(); ++i)
        os << table.grid.nodes[i] << ',' << table.E_minus[i] << ',' << table.E_plus[i] << '\n';
    return os.str();
}

}  // namespace slopeflow
