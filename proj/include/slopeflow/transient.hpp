/**
 * @file transient.hpp
 * @brief Explicit conservative time stepping for the saturated thickness.
 *
 * The thickness h_hat evolves by dh/dt + dQ/dx = f with the face flux
 * Q = -c h_hat phi_pow(p, dh/dx cos phi + sin phi), Dirichlet thickness at
 * both ends. First-order explicit stepping under a CFL bound keeps the
 * scheme conservative and easy to audit; negative values (dry bed) are
 * clipped to zero with the clipped mass logged, not treated as failure.
 */

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slopeflow/problem.hpp"
#include "slopeflow/profile.hpp"

namespace slopeflow {

struct TransientState {
    Grid grid;
    std::vector<double> h_hat;  ///< nodal thickness values, >= 0
    double t = 0.0;
    double dt = 0.0;  ///< last step size taken
    double H_minus = 1.0;
    double H_plus = 1.0;

    /// Constant initial thickness h0 == spec.H (or spec.initial_profile if set),
    /// boundaries from spec.H_minus / spec.H_plus.
    static TransientState initial(const ProblemSpec& spec, int n_cells);

    /// Trapezoid mass int h_hat dx.
    double mass() const;

    /// CSV snapshot: header "x,h_hat".
    std::string to_csv() const;
};

struct CflViolation : std::runtime_error {
    double suggested_dt;
    explicit CflViolation(double dt_ok)
        : std::runtime_error("time step exceeds the CFL bound"), suggested_dt(dt_ok) {}
};

/// Face fluxes Q_{j+1/2}, j = 0..n_cells-1: arithmetic-mean thickness,
/// cell-difference gradient.
std::vector<double> face_fluxes(const ProblemSpec& spec, const Grid& grid,
                                const std::vector<double>& h_hat);

/// Largest admissible explicit step for the current state: 0.4 dx^2 over
/// the stiffest face diffusion coefficient and 0.4 dx over the drift speed.
double cfl_limit(const ProblemSpec& spec, const TransientState& state);

/// One conservative explicit step. Throws CflViolation (with the admissible
/// step) when dt is too large. Negative interior values are clipped to zero;
/// the clipped mass (integral of the clipped amount) is accumulated into
/// *clipped if given.
TransientState step(const ProblemSpec& spec, const TransientState& state, double dt,
                    double* clipped = nullptr);

struct RunSummary {
    double t_end = 0.0;
    long steps = 0;
    double clipped_mass = 0.0;
    double final_sup_distance = -1.0;  ///< vs steady u+H; -1 if no steady given

    std::string to_json() const;
};

/// Steps from state0 to t_end with adaptive dt under the CFL rule, invoking
/// the callback every snapshot_every time units (and at t_end); cadence 0
/// disables snapshots. If a steady profile is given, reports the final sup
/// distance of h_hat to u + H.
RunSummary run(const ProblemSpec& spec, TransientState state0, double t_end,
               double snapshot_every,
               const std::function<void(const TransientState&)>& callback = {},
               const SolutionProfile* steady = nullptr);

}  // namespace slopeflow
