/**
 * @file steady.hpp
 * @brief Shooting solver for the steady problem via its first-order reduction.
 *
 * The steady equation admits an exact first-order form
 *   (u + H) phi_pow(p, u' cos phi + sin phi) = kappa + int_x^1 f,
 * with kappa = H phi_pow(p, u'(1) cos phi + sin phi) fixed by the trial
 * derivative s = u'(1). Integrating backwards from (1, 0) and rooting the
 * left endpoint value over s solves the boundary value problem.
 */

#pragma once

#include <vector>

#include "slopeflow/problem.hpp"
#include "slopeflow/profile.hpp"

namespace slopeflow {

struct ShooterConfig {
    double bracket_init_lo = -1.0;
    double bracket_init_hi = 1.0;
    int max_expansions = 40;
    double root_tol = 1e-12;
    double head_guard_rel = 1e-9;  ///< head guard = head_guard_rel * H

    void validate() const;
};

enum class ShootStatus { Ok, NoBracket, Infeasible, Tolerance };

struct ShootResult {
    ShootStatus status = ShootStatus::Ok;
    SolutionProfile profile;
    std::vector<double> all_roots;  ///< every sign-change root found in the scan
};

struct TrialTrajectory {
    SolutionProfile profile;
    double endpoint = 0.0;  ///< u(-1)
    bool feasible = true;
};

/// Integrates the first-order form backwards from (x=1, u=0) with classic
/// RK4 for trial derivative s. Infeasible trajectories (u + H below the
/// guard) are flagged, not thrown.
TrialTrajectory integrate_profile(const ProblemSpec& spec, double s, const Grid& grid,
                                  const ShooterConfig& config = {});

/// Full solve: bracket scan + expansion, bisection to root_tol, one secant
/// polish. Multiple roots are all reported; the smallest |s| wins.
ShootResult solve_steady(const ProblemSpec& spec, const Grid& grid,
                         const ShooterConfig& config = {});

/// Max-norm residual of the first-order identity over the profile's nodes.
double first_order_residual(const ProblemSpec& spec, const SolutionProfile& profile);

}  // namespace slopeflow
