#include "slopeflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "slopeflow/power.hpp"

namespace slopeflow {

void FdConfig::validate() const {
    if (n_cells < 16) throw std::invalid_argument("FdConfig: need at least 16 cells");
    if (damping_min <= 0.0 || damping_min > 1.0)
        throw std::invalid_argument("FdConfig: damping_min must lie in (0,1]");
    if (newton_tol <= 0.0) throw std::invalid_argument("FdConfig: newton_tol must be positive");
    if (continuation_steps < 1)
        throw std::invalid_argument("FdConfig: need at least one continuation step");
}

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Damped-Newton solve of the piecewise-linear weak form on an arbitrary
// grid. Returns the interior nodal values through `u`.
FdStatus newton_solve(const ProblemSpec& spec, const FdConfig& config, bool truncated,
                      double k, const Grid& grid, std::vector<double>& u,
                      int& continuation_reached,
                      const std::vector<double>* warm_start = nullptr) {
    const int n = grid.n_cells();
    const double cphi = std::cos(spec.phi), sphi = std::sin(spec.phi);

    // Cell flux from the two endpoint values: thickness at the cell midpoint
    // (optionally truncated), gradient by the cell difference. The odd power
    // is smoothed with eps because its derivative vanishes (p > 2) or blows
    // up (p < 2) where the argument crosses zero, which stalls Newton; eps
    // is driven to zero by continuation after the amplitude ramp.
    auto flux = [&](int cell, double u_lo, double u_hi, double eps) {
        const double mid = 0.5 * (u_lo + u_hi);
        const double a = truncated ? truncate(mid, k) : mid;
        const double z = (u_hi - u_lo) / grid.spacing(cell) * cphi + sphi;
        const double odd =
            eps > 0.0 ? std::pow(z * z + eps * eps, 0.5 * (spec.p - 2.0)) * z
                      : phi_pow(spec.p, z);
        return (a + spec.H) * odd;
    };

    // Closed-form partials of the cell flux with respect to its endpoint
    // values. A differenced Jacobian is not accurate enough here: near a
    // gradient sign change the smoothed power has exploding higher
    // derivatives as eps shrinks, and the Newton rows cancel by several
    // orders, so even 1e-5 relative entry error stalls the iteration.
    auto flux_partials = [&](int cell, double u_lo, double u_hi, double eps,
                             double& d_lo, double& d_hi) {
        const double mid = 0.5 * (u_lo + u_hi);
        const double a = truncated ? truncate(mid, k) : mid;
        const double thick_sens = truncated && std::abs(mid) >= k ? 0.0 : 0.5;
        const double z = (u_hi - u_lo) / grid.spacing(cell) * cphi + sphi;
        double odd, odd_prime;
        if (eps > 0.0) {
            const double s2 = z * z + eps * eps;
            const double base = std::pow(s2, 0.5 * (spec.p - 2.0));
            odd = base * z;
            odd_prime = base * (1.0 + (spec.p - 2.0) * z * z / s2);
        } else {
            odd = phi_pow(spec.p, z);
            odd_prime = z == 0.0 ? 0.0
                                 : (spec.p - 1.0) * std::pow(std::abs(z), spec.p - 2.0);
        }
        const double grad_sens = (a + spec.H) * odd_prime * cphi / grid.spacing(cell);
        d_lo = thick_sens * odd - grad_sens;
        d_hi = thick_sens * odd + grad_sens;
    };

    // Exact hat-function loads int f * v_i for interior nodes i = 1..n-1.
    std::vector<double> load(n - 1);
    for (int i = 1; i < n; ++i) {
        const double xm = grid.nodes[i - 1], xc = grid.nodes[i], xp = grid.nodes[i + 1];
        const double hl = xc - xm, hr = xp - xc;
        const Polynomial up{{-xm / hl, 1.0 / hl}};    // rising edge on [xm, xc]
        const Polynomial down{{xp / hr, -1.0 / hr}};  // falling edge on [xc, xp]
        load[i - 1] = spec.source.integral_against(up, xm, xc) +
                      spec.source.integral_against(down, xc, xp);
    }

    // Interior unknowns u[0..n-2] ~ nodes 1..n-1; the residual at node i is
    // flux_{i-1} - flux_i - amplitude * load_i.
    auto eval_residual = [&](const std::vector<double>& ui, double amp, double eps,
                             std::vector<double>& out) {
        std::vector<double> full(n + 1, 0.0);
        std::copy(ui.begin(), ui.end(), full.begin() + 1);
        out.assign(n - 1, 0.0);
        double prev = flux(0, full[0], full[1], eps);
        for (int i = 1; i < n; ++i) {
            const double next = flux(i, full[i], full[i + 1], eps);
            out[i - 1] = prev - next - amp * load[i - 1];
            prev = next;
        }
    };

    std::vector<double> res, res_trial, u_trial;
    continuation_reached = 0;

    // Continuation schedule: ramp the source amplitude at a fixed smoothing,
    // then drive the smoothing to zero at full amplitude. With a warm start
    // the ramp is skipped: the guess already carries the full-amplitude shape
    // and only the smoothing has to be peeled off.
    struct Stage {
        double amp;
        double eps;
        bool final;
    };
    std::vector<Stage> stages;
    const double eps0 = 0.1;  // strong smoothing keeps the ramp parabolic
    if (warm_start != nullptr) {
        u = *warm_start;
        stages.push_back({1.0, eps0, false});
    } else {
        u.assign(n - 1, 0.0);  // homotopy starts from the zero solution
        for (int level = 1; level <= config.continuation_steps; ++level)
            stages.push_back({static_cast<double>(level) / config.continuation_steps, eps0, false});
    }
    for (double eps : {3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6, 1e-7,
                       1e-8, 1e-9, 1e-10, 0.0})
        stages.push_back({1.0, eps, eps == 0.0});

    for (std::size_t stage_idx = 0; stage_idx < stages.size(); ++stage_idx) {
        const auto [amp, eps, final_stage] = stages[stage_idx];
        eval_residual(u, amp, eps, res);
        const double tol_final = config.newton_tol * (1.0 + inf_norm(load));
        const double tol = final_stage ? tol_final : std::max(tol_final, 1e-10);
        bool converged = inf_norm(res) <= tol;
        for (int iter = 0; iter < config.max_iters && !converged; ++iter) {
            // Tridiagonal Jacobian: perturbing node `col` only moves the
            // fluxes of cells col-1 and col, hence only the residuals at
            // nodes col-1, col, col+1.
            std::vector<double> dl(n - 1, 0.0), d(n - 1, 0.0), du_band(n - 1, 0.0);
            std::vector<double> full(n + 1, 0.0);
            std::copy(u.begin(), u.end(), full.begin() + 1);
            for (int col = 1; col < n; ++col) {
                double dfl_lo, dfl, dfr, dfr_hi;
                flux_partials(col - 1, full[col - 1], full[col], eps, dfl_lo, dfl);
                flux_partials(col, full[col], full[col + 1], eps, dfr, dfr_hi);
                d[col - 1] = dfl - dfr;
                if (col >= 2) du_band[col - 2] = -dfl;   // residual at node col-1
                if (col <= n - 2) dl[col] = dfr;         // residual at node col+1
            }

            // Thomas elimination on (dl, d, du_band) * delta = -res.
            std::vector<double> B(res);
            for (double& v : B) v = -v;
            bool ok = true;
            for (int i = 1; i < n - 1; ++i) {
                if (d[i - 1] == 0.0) { ok = false; break; }
                const double w = dl[i] / d[i - 1];
                d[i] -= w * du_band[i - 1];
                B[i] -= w * B[i - 1];
            }
            if (ok && d[n - 2] == 0.0) ok = false;
            if (!ok) return FdStatus::JacobianSingular;
            std::vector<double> delta(n - 1, 0.0);
            delta[n - 2] = B[n - 2] / d[n - 2];
            for (int i = n - 3; i >= 0; --i) delta[i] = (B[i] - du_band[i] * delta[i + 1]) / d[i];

            // Damped line search on the residual norm.
            const double base_norm = inf_norm(res);
            double damping = 1.0;
            bool accepted = false;
            while (damping >= config.damping_min) {
                u_trial = u;
                for (int i = 0; i < n - 1; ++i) u_trial[i] += damping * delta[i];
                eval_residual(u_trial, amp, eps, res_trial);
                if (inf_norm(res_trial) < base_norm) {
                    u = std::move(u_trial);
                    res = std::move(res_trial);
                    accepted = true;
                    break;
                }
                damping *= 0.5;
            }
            if (!accepted) return FdStatus::NewtonDiverged;
            converged = inf_norm(res) <= tol;
        }
        if (!converged) return FdStatus::NewtonDiverged;
        continuation_reached = static_cast<int>(
            std::min<std::size_t>(stage_idx + 1, config.continuation_steps));
    }
    return FdStatus::Ok;
}

// Nonuniform second-order three-point derivative reconstruction.
std::vector<double> reconstruct_du(const Grid& grid, const std::vector<double>& u) {
    const std::size_t n = grid.nodes.size() - 1;
    std::vector<double> du(n + 1, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double h1 = grid.nodes[i] - grid.nodes[i - 1];
        const double h2 = grid.nodes[i + 1] - grid.nodes[i];
        du[i] = -h2 / (h1 * (h1 + h2)) * u[i - 1] + (h2 - h1) / (h1 * h2) * u[i] +
                h1 / (h2 * (h1 + h2)) * u[i + 1];
    }
    {
        const double h1 = grid.nodes[1] - grid.nodes[0];
        const double h2 = grid.nodes[2] - grid.nodes[1];
        du[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * u[0] + (h1 + h2) / (h1 * h2) * u[1] -
                h1 / (h2 * (h1 + h2)) * u[2];
    }
    {
        const double h1 = grid.nodes[n] - grid.nodes[n - 1];
        const double h2 = grid.nodes[n - 1] - grid.nodes[n - 2];
        du[n] = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * u[n] - (h1 + h2) / (h1 * h2) * u[n - 1] +
                h1 / (h2 * (h1 + h2)) * u[n - 2];
    }
    return du;
}

// Zero crossings of the flux argument u' cos phi + sin phi between adjacent
// cells; each is a curvature blow-up point of the exact solution.
std::vector<double> detect_cusps(const ProblemSpec& spec, const Grid& grid,
                                 const std::vector<double>& u) {
    const double cphi = std::cos(spec.phi), sphi = std::sin(spec.phi);
    const int n = grid.n_cells();
    std::vector<double> cusps;
    double prev_mid = 0.0, prev_z = 0.0;
    for (int j = 0; j < n; ++j) {
        const double mid = 0.5 * (grid.nodes[j] + grid.nodes[j + 1]);
        const double z = (u[j + 1] - u[j]) / grid.spacing(j) * cphi + sphi;
        if (j > 0 && (prev_z < 0.0) != (z < 0.0) && z != prev_z)
            cusps.push_back(prev_mid + (mid - prev_mid) * prev_z / (prev_z - z));
        prev_mid = mid;
        prev_z = z;
    }
    return cusps;
}

// Uniform nodes plus a quadratically graded patch accumulating at each cusp.
// Every uniform node is kept so coarse profiles stay comparable node-by-node.
Grid graded_grid(int n_cells, const std::vector<double>& cusps) {
    const Grid base = Grid::uniform(n_cells);
    const double h = 2.0 / n_cells;
    std::set<double> nodes(base.nodes.begin(), base.nodes.end());
    for (double c : cusps) {
        const double w = 0.25;
        const int m = static_cast<int>(std::ceil(1.5 * w / h));
        for (int side = -1; side <= 1; side += 2) {
            for (int j = 0; j <= m; ++j) {
                const double frac = static_cast<double>(j) / m;
                const double t = c + side * w * frac * frac;
                if (t <= -1.0 + 0.25 * h || t >= 1.0 - 0.25 * h) continue;
                // Skip candidates crowding an existing node closer than a
                // quarter of the local graded spacing.
                const double local = std::max(w * (2.0 * j + 1.0) / (m * m), 1e-12);
                auto it = nodes.lower_bound(t);
                const double gap_hi = it == nodes.end() ? 1e300 : *it - t;
                const double gap_lo = it == nodes.begin() ? 1e300 : t - *std::prev(it);
                if (std::min(gap_hi, gap_lo) < 0.25 * std::min(local, h)) continue;
                nodes.insert(t);
            }
        }
    }
    Grid out;
    out.nodes.assign(nodes.begin(), nodes.end());
    return out;
}

SolutionProfile pack_profile(const ProblemSpec& spec, const Grid& grid,
                             const std::vector<double>& interior) {
    SolutionProfile prof;
    const std::size_t n = grid.nodes.size() - 1;
    prof.grid = grid;
    prof.u.assign(n + 1, 0.0);
    std::copy(interior.begin(), interior.end(), prof.u.begin() + 1);
    prof.du = reconstruct_du(grid, prof.u);
    prof.s_end = prof.du[n];
    prof.kappa =
        spec.H * phi_pow(spec.p, prof.s_end * std::cos(spec.phi) + std::sin(spec.phi));
    double mh = spec.H;
    for (double v : prof.u) mh = std::min(mh, v + spec.H);
    prof.min_head = mh;
    return prof;
}

}  // namespace

FdResult solve_fd(const ProblemSpec& spec, const FdConfig& config, bool truncated, double k) {
    spec.validate();
    config.validate();
    if (truncated && k < 0.0) throw std::invalid_argument("solve_fd: truncation level must be >= 0");

    FdResult result;
    const Grid uniform = Grid::uniform(config.n_cells);
    std::vector<double> u;
    result.status =
        newton_solve(spec, config, truncated, k, uniform, u, result.continuation_reached);
    if (result.status != FdStatus::Ok) return result;

    // Where the flux argument changes sign the solution's second derivative
    // blows up and the uniform grid loses accuracy; re-solve on a grid with
    // a graded patch around each such point.
    const std::vector<double> cusps = detect_cusps(spec, uniform, pack_profile(spec, uniform, u).u);
    if (cusps.empty()) {
        result.profile = pack_profile(spec, uniform, u);
        return result;
    }
    const Grid refined = graded_grid(config.n_cells, cusps);

    // Warm-start the refined solve by interpolating the converged uniform
    // solution; re-running the amplitude ramp from zero is fragile on the
    // strongly graded patch, where tiny cells shrink Newton's basin.
    std::vector<double> guess(refined.nodes.size() - 2);
    {
        std::vector<double> full(uniform.nodes.size(), 0.0);
        std::copy(u.begin(), u.end(), full.begin() + 1);
        std::size_t c = 0;
        for (std::size_t i = 1; i + 1 < refined.nodes.size(); ++i) {
            const double x = refined.nodes[i];
            while (c + 2 < uniform.nodes.size() && uniform.nodes[c + 1] <= x) ++c;
            const double t = (x - uniform.nodes[c]) / (uniform.nodes[c + 1] - uniform.nodes[c]);
            guess[i - 1] = (1.0 - t) * full[c] + t * full[c + 1];
        }
    }
    std::vector<double> u_fine;
    int reached = 0;
    const FdStatus fine_status =
        newton_solve(spec, config, truncated, k, refined, u_fine, reached, &guess);
    if (fine_status != FdStatus::Ok) {
        // Fall back to the uniform solution rather than failing outright.
        result.profile = pack_profile(spec, uniform, u);
        return result;
    }
    result.profile = pack_profile(spec, refined, u_fine);
    return result;
}

std::pair<double, double> compare_profiles(const SolutionProfile& a, const SolutionProfile& b) {
    const SolutionProfile& coarse = a.grid.nodes.size() <= b.grid.nodes.size() ? a : b;
    const SolutionProfile& fine = a.grid.nodes.size() <= b.grid.nodes.size() ? b : a;
    double sup = 0.0, l2 = 0.0;
    std::size_t j = 0;
    std::size_t matched = 0;
    double prev_x = coarse.grid.nodes.front();
    for (std::size_t i = 0; i < coarse.grid.nodes.size(); ++i) {
        const double x = coarse.grid.nodes[i];
        while (j + 1 < fine.grid.nodes.size() && fine.grid.nodes[j] < x - 1e-12) ++j;
        if (std::abs(fine.grid.nodes[j] - x) > 1e-12) continue;
        const double diff = coarse.u[i] - fine.u[j];
        sup = std::max(sup, std::abs(diff));
        l2 += diff * diff * (i == 0 ? 0.0 : x - prev_x);
        prev_x = x;
        ++matched;
    }
    if (matched < 2) throw std::invalid_argument("compare_profiles: grids share no nodes");
    return {sup, std::sqrt(l2)};
}

}  // namespace slopeflow
