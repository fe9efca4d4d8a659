#include "slopeflow/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "slopeflow/power.hpp"

namespace slopeflow {

void ShooterConfig::validate() const {
    if (root_tol <= 0.0) throw std::invalid_argument("ShooterConfig: root_tol must be positive");
    if (head_guard_rel <= 0.0)
        throw std::invalid_argument("ShooterConfig: head guard must be positive");
    if (bracket_init_hi <= bracket_init_lo)
        throw std::invalid_argument("ShooterConfig: empty bracket");
}

namespace {

struct Rhs {
    const ProblemSpec& spec;
    double kappa;
    double guard;

    // u'(x) from the first-order identity; quotient guarded from below.
    bool eval(double x, double u, double& out) const {
        const double head = u + spec.H;
        if (head <= guard) return false;
        const double q = (kappa + spec.source.tail(x)) / head;
        out = phi_pow(spec.conj_p(), q) / std::cos(spec.phi) - std::tan(spec.phi);
        return true;
    }
};

// Zeros of kappa + int_x^1 f inside [-1,1]. At such a point the right-hand
// side above has a |x - x*|^(1/(p-1)) cusp (for p > 2), which costs the
// integrator its order unless steps are graded around it.
std::vector<double> cusp_points(const ProblemSpec& spec, double kappa) {
    std::vector<double> roots;
    auto g = [&](double x) { return kappa + spec.source.tail(x); };
    const int m = 2048;
    double prev_x = -1.0, prev_g = g(-1.0);
    for (int i = 1; i <= m; ++i) {
        const double x = -1.0 + 2.0 * i / m;
        const double gx = g(x);
        if ((prev_g < 0.0) != (gx < 0.0)) {
            double a = prev_x, b = x, ga = prev_g;
            for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
                const double mid = 0.5 * (a + b);
                const double gm = g(mid);
                if ((ga < 0.0) != (gm < 0.0)) {
                    b = mid;
                } else {
                    a = mid;
                    ga = gm;
                }
            }
            roots.push_back(0.5 * (a + b));
        } else if (gx == 0.0) {
            roots.push_back(x);
        }
        prev_x = x;
        prev_g = gx;
    }
    return roots;
}

}  // namespace

TrialTrajectory integrate_profile(const ProblemSpec& spec, double s, const Grid& grid,
                                  const ShooterConfig& config) {
    spec.validate();
    grid.validate();
    config.validate();

    const double kappa = spec.H * phi_pow(spec.p, s * std::cos(spec.phi) + std::sin(spec.phi));
    const Rhs rhs{spec, kappa, config.head_guard_rel * spec.H};

    const int n = grid.n_cells();
    TrialTrajectory out;
    out.profile.grid = grid;
    out.profile.u.assign(n + 1, 0.0);
    out.profile.du.assign(n + 1, 0.0);
    out.profile.s_end = s;
    out.profile.kappa = kappa;

    // Classic RK4, marching from x = 1 down to x = -1. Steps are graded
    // around the cusp points of the right-hand side so the integrator keeps
    // its order through the |x - x*|^(1/(p-1)) kinks.
    const std::vector<double> cusps = cusp_points(spec, kappa);
    auto rk4 = [&](double x_hi, double x_lo, double& u) {
        const double h = x_lo - x_hi;  // negative
        double k1, k2, k3, k4;
        bool ok = rhs.eval(x_hi, u, k1) &&
                  rhs.eval(x_hi + 0.5 * h, u + 0.5 * h * k1, k2) &&
                  rhs.eval(x_hi + 0.5 * h, u + 0.5 * h * k2, k3) &&
                  rhs.eval(x_hi + h, u + h * k3, k4);
        if (ok) u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        return ok;
    };

    double u = 0.0;
    bool ok = true;
    for (int i = n; i > 0 && ok; --i) {
        const double x1 = grid.nodes[i], x0 = grid.nodes[i - 1];
        const double h = x1 - x0;
        bool has_inside = false;
        double inside = 0.0;
        double dist = std::numeric_limits<double>::infinity();
        for (double c : cusps) {
            if (c > x0 && c < x1) {
                has_inside = true;
                inside = c;
            }
            dist = std::min(dist, std::max({x0 - c, c - x1, 0.0}));
        }
        if (has_inside) {
            // Quadratically graded substeps accumulating at the cusp from
            // both sides.
            const int m = 24;
            const double c = inside;
            double prev = x1;
            for (int j = 1; j <= m && ok; ++j) {
                const double frac = static_cast<double>(m - j) / m;
                const double t = c + (x1 - c) * frac * frac;
                ok = rk4(prev, t, u);
                prev = t;
            }
            for (int j = 1; j <= m && ok; ++j) {
                const double frac = static_cast<double>(j) / m;
                const double t = c - (c - x0) * frac * frac;
                ok = rk4(prev, t, u);
                prev = t;
            }
        } else {
            // Uniform substeps, more of them the closer the cusp is.
            int m = 1;
            if (dist < 4.0 * h) {
                m = 32;
            } else if (dist < 32.0 * h) {
                m = 8;
            }
            double prev = x1;
            for (int j = 1; j <= m && ok; ++j) {
                const double t = x1 + (x0 - x1) * j / m;
                ok = rk4(prev, t, u);
                prev = t;
            }
        }
        if (!ok) {
            out.feasible = false;
            return out;
        }
        out.profile.u[i - 1] = u;
        if (u + spec.H <= rhs.guard) {
            out.feasible = false;
            return out;
        }
    }
    for (int i = 0; i <= n; ++i) {
        double d = 0.0;
        if (!rhs.eval(grid.nodes[i], out.profile.u[i], d)) {
            out.feasible = false;
            return out;
        }
        out.profile.du[i] = d;
    }
    out.endpoint = out.profile.u[0];
    double mh = std::numeric_limits<double>::infinity();
    for (double v : out.profile.u) mh = std::min(mh, v + spec.H);
    out.profile.min_head = mh;
    return out;
}

double first_order_residual(const ProblemSpec& spec, const SolutionProfile& profile) {
    const double c = std::cos(spec.phi), si = std::sin(spec.phi);
    double worst = 0.0;
    for (std::size_t i = 0; i < profile.grid.nodes.size(); ++i) {
        const double lhs =
            (profile.u[i] + spec.H) * phi_pow(spec.p, profile.du[i] * c + si);
        const double r = lhs - profile.kappa - spec.source.tail(profile.grid.nodes[i]);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

ShootResult solve_steady(const ProblemSpec& spec, const Grid& grid, const ShooterConfig& config) {
    spec.validate();
    config.validate();

    ShootResult result;
    auto endpoint = [&](double s, bool& feasible) {
        const TrialTrajectory t = integrate_profile(spec, s, grid, config);
        feasible = t.feasible;
        return t.endpoint;
    };

    // Bracket scan with doubling expansion.
    double lo = config.bracket_init_lo, hi = config.bracket_init_hi;
    const int samples = 33;
    std::vector<std::pair<double, double>> brackets;  // sign-change intervals
    bool any_feasible = false;
    for (int expansion = 0; expansion <= config.max_expansions; ++expansion) {
        brackets.clear();
        double prev_s = 0.0, prev_e = 0.0;
        bool have_prev = false;
        for (int k = 0; k < samples; ++k) {
            const double s = lo + (hi - lo) * k / (samples - 1);
            bool feasible = false;
            const double e = endpoint(s, feasible);
            if (!feasible) {
                have_prev = false;
                continue;
            }
            any_feasible = true;
            if (have_prev && (prev_e < 0.0) != (e < 0.0)) brackets.emplace_back(prev_s, s);
            if (e == 0.0) brackets.emplace_back(s, s);
            prev_s = s;
            prev_e = e;
            have_prev = true;
        }
        if (!brackets.empty()) break;
        const double w = hi - lo;
        lo -= 0.5 * w;
        hi += 0.5 * w;
    }
    if (brackets.empty()) {
        result.status = any_feasible ? ShootStatus::NoBracket : ShootStatus::Infeasible;
        return result;
    }

    // Bisection per bracket, one secant polish each.
    for (auto [a, b] : brackets) {
        if (a == b) {
            result.all_roots.push_back(a);
            continue;
        }
        bool fa_ok = false, fb_ok = false;
        double fa = endpoint(a, fa_ok);
        endpoint(b, fb_ok);
        while (b - a > config.root_tol) {
            const double mid = 0.5 * (a + b);
            bool ok = false;
            const double fm = endpoint(mid, ok);
            if (!ok) break;  // narrow infeasible sliver; stop at current width
            if ((fa < 0.0) != (fm < 0.0)) {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        double root = 0.5 * (a + b);
        bool ok1 = false, ok2 = false;
        const double e1 = endpoint(a, ok1), e2 = endpoint(b, ok2);
        if (ok1 && ok2 && e2 != e1) {
            const double sec = a - e1 * (b - a) / (e2 - e1);
            if (sec > a && sec < b) root = sec;
        }
        result.all_roots.push_back(root);
    }
    std::sort(result.all_roots.begin(), result.all_roots.end(),
              [](double x, double y) { return std::abs(x) < std::abs(y); });

    const double s_star = result.all_roots.front();
    TrialTrajectory best = integrate_profile(spec, s_star, grid, config);
    if (!best.feasible) {
        result.status = ShootStatus::Infeasible;
        return result;
    }
    best.profile.residual_first_order = first_order_residual(spec, best.profile);
    const double scale = 1.0 + spec.source.l1_norm();
    if (std::abs(best.endpoint) > 1e-7 * scale) result.status = ShootStatus::Tolerance;
    result.profile = std::move(best.profile);
    return result;
}

}  // namespace slopeflow
