#include "slopeflow/transient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "slopeflow/power.hpp"

namespace slopeflow {

TransientState TransientState::initial(const ProblemSpec& spec, int n_cells) {
    spec.validate();
    TransientState s;
    s.grid = Grid::uniform(n_cells);
    s.H_minus = spec.H_minus;
    s.H_plus = spec.H_plus;
    if (spec.initial_profile.empty()) {
        s.h_hat.assign(s.grid.nodes.size(), spec.H);
    } else {
        if (spec.initial_profile.size() != s.grid.nodes.size())
            throw std::invalid_argument("initial profile does not match the grid");
        s.h_hat = spec.initial_profile;
    }
    s.h_hat.front() = s.H_minus;
    s.h_hat.back() = s.H_plus;
    return s;
}

double TransientState::mass() const {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < h_hat.size(); ++i)
        m += 0.5 * (h_hat[i] + h_hat[i + 1]) * (grid.nodes[i + 1] - grid.nodes[i]);
    return m;
}

std::string TransientState::to_csv() const {
    std::ostringstream os;
    os << "x,h_hat\n";
    os.precision(17);
    for (std::size_t i = 0; i < h_hat.size(); ++i)
        os << grid.nodes[i] << ',' << h_hat[i] << '\n';
    return os.str();
}

std::vector<double> face_fluxes(const ProblemSpec& spec, const Grid& grid,
                                const std::vector<double>& h_hat) {
    const double cphi = std::cos(spec.phi), sphi = std::sin(spec.phi);
    const int n = grid.n_cells();
    std::vector<double> Q(n);
    for (int j = 0; j < n; ++j) {
        const double dx = grid.spacing(j);
        const double h_face = 0.5 * (h_hat[j] + h_hat[j + 1]);
        const double slope = (h_hat[j + 1] - h_hat[j]) / dx;
        Q[j] = -spec.conductivity * h_face * phi_pow(spec.p, slope * cphi + sphi);
    }
    return Q;
}

double cfl_limit(const ProblemSpec& spec, const TransientState& state) {
    const double cphi = std::cos(spec.phi), sphi = std::sin(spec.phi);
    const int n = state.grid.n_cells();
    double dx_min = std::numeric_limits<double>::infinity();
    double stiffest = 0.0;
    for (int j = 0; j < n; ++j) {
        const double dx = state.grid.spacing(j);
        dx_min = std::min(dx_min, dx);
        const double h_face = 0.5 * (state.h_hat[j] + state.h_hat[j + 1]);
        if (h_face <= 0.0) continue;  // dry face carries no flux
        const double arg = (state.h_hat[j + 1] - state.h_hat[j]) / dx * cphi + sphi;
        const double coeff = spec.conductivity * (spec.p - 1.0) * h_face *
                             std::pow(std::abs(arg), spec.p - 2.0) * cphi * cphi;
        stiffest = std::max(stiffest, coeff);
    }
    const double drift = spec.conductivity * spec.lambda();
    double dt = 0.4 * dx_min / drift;
    if (stiffest > 0.0) dt = std::min(dt, 0.4 * dx_min * dx_min / stiffest);
    return dt;
}

TransientState step(const ProblemSpec& spec, const TransientState& state, double dt,
                    double* clipped) {
    if (dt <= 0.0) throw std::invalid_argument("step: dt must be positive");
    const double dt_ok = cfl_limit(spec, state);
    if (dt > dt_ok * (1.0 + 1e-12)) throw CflViolation(dt_ok);

    const std::vector<double> Q = face_fluxes(spec, state.grid, state.h_hat);
    TransientState next = state;
    const int n = state.grid.n_cells();
    for (int i = 1; i < n; ++i) {
        const double dx = 0.5 * (state.grid.nodes[i + 1] - state.grid.nodes[i - 1]);
        double h = state.h_hat[i] - dt * (Q[i] - Q[i - 1]) / dx +
                   dt * spec.source.eval(state.grid.nodes[i]);
        if (h < 0.0) {
            if (clipped) *clipped += -h * dx;
            h = 0.0;
        }
        next.h_hat[i] = h;
    }
    next.h_hat.front() = state.H_minus;
    next.h_hat.back() = state.H_plus;
    next.t = state.t + dt;
    next.dt = dt;
    return next;
}

std::string RunSummary::to_json() const {
    nlohmann::json j{{"t_end", t_end},
                     {"steps", steps},
                     {"clipped_mass", clipped_mass},
                     {"final_sup_distance", final_sup_distance}};
    return j.dump(2);
}

namespace {

// |z|^e with shortcuts for the exponents the integer p values produce.
double abs_pow(double z, double e) {
    const double a = std::abs(z);
    if (e == 1.0) return a;
    if (e == 2.0) return a * a;
    if (e == 0.5) return std::sqrt(a);
    return std::pow(a, e);
}

}  // namespace

RunSummary run(const ProblemSpec& spec, TransientState state0, double t_end,
               double snapshot_every, const std::function<void(const TransientState&)>& callback,
               const SolutionProfile* steady) {
    RunSummary summary;
    TransientState state = std::move(state0);
    double next_snapshot = snapshot_every > 0.0 ? state.t + snapshot_every
                                                : std::numeric_limits<double>::infinity();

    // The inner loop runs millions of explicit steps; keep it allocation
    // free and precompute everything time-independent.
    const int n = state.grid.n_cells();
    const double cphi = std::cos(spec.phi), sphi = std::sin(spec.phi);
    const double drift_speed = spec.conductivity * spec.lambda();
    std::vector<double> f_node(n + 1), dx_cell(n), dx_node(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) f_node[i] = spec.source.eval(state.grid.nodes[i]);
    for (int j = 0; j < n; ++j) dx_cell[j] = state.grid.spacing(j);
    for (int i = 1; i < n; ++i)
        dx_node[i] = 0.5 * (state.grid.nodes[i + 1] - state.grid.nodes[i - 1]);
    std::vector<double>& h = state.h_hat;
    std::vector<double> Q(n);

    while (state.t < t_end) {
        // Fluxes and the CFL bound in one sweep.
        double stiffest = 0.0, dx_min = dx_cell[0];
        for (int j = 0; j < n; ++j) {
            const double dx = dx_cell[j];
            dx_min = std::min(dx_min, dx);
            const double h_face = 0.5 * (h[j] + h[j + 1]);
            const double arg = (h[j + 1] - h[j]) / dx * cphi + sphi;
            Q[j] = -spec.conductivity * h_face * phi_pow(spec.p, arg);
            if (h_face > 0.0) {
                const double coeff = spec.conductivity * (spec.p - 1.0) * h_face *
                                     abs_pow(arg, spec.p - 2.0) * cphi * cphi;
                stiffest = std::max(stiffest, coeff);
            }
        }
        double dt = 0.4 * dx_min / drift_speed;
        if (stiffest > 0.0) dt = std::min(dt, 0.4 * dx_min * dx_min / stiffest);
        dt = std::min(dt, t_end - state.t);
        dt = std::min(dt, next_snapshot - state.t);

        for (int i = 1; i < n; ++i) {
            double v = h[i] - dt * (Q[i] - Q[i - 1]) / dx_node[i] + dt * f_node[i];
            if (v < 0.0) {
                summary.clipped_mass += -v * dx_node[i];
                v = 0.0;
            }
            h[i] = v;
        }
        h.front() = state.H_minus;
        h.back() = state.H_plus;
        state.t += dt;
        state.dt = dt;
        ++summary.steps;
        if (callback && state.t >= next_snapshot - 1e-14) {
            callback(state);
            next_snapshot += snapshot_every;
        }
    }
    if (callback) callback(state);
    summary.t_end = state.t;
    if (steady) {
        double worst = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i)
            worst = std::max(worst, std::abs(h[i] - (steady->u[i] + spec.H)));
        summary.final_sup_distance = worst;
    }
    return summary;
}

}  // namespace slopeflow
