/**
 * @file oracle.hpp
 * @brief Independent finite-difference reference solver of the weak form.
 *
 * Deliberately built from different ingredients than the shooting solver:
 * piecewise-linear Galerkin discretization of the weak formulation,
 * midpoint flux quadrature, damped Newton with homotopy in the source
 * amplitude followed by continuation in a gradient smoothing parameter.
 * Where the flux argument changes sign the exact solution loses regularity;
 * such points are detected and the solve is repeated on a grid with a
 * quadratically graded patch around each one (keeping every uniform node,
 * so profiles on different resolutions stay comparable). Nothing here
 * reuses the first-order reduction it is meant to cross-check.
 */

#pragma once

#include "slopeflow/problem.hpp"
#include "slopeflow/profile.hpp"

namespace slopeflow {

struct FdConfig {
    int n_cells = 512;
    double newton_tol = 1e-12;
    int max_iters = 60;
    double damping_min = 1.0 / 1024.0;
    int continuation_steps = 4;

    void validate() const;
};

enum class FdStatus { Ok, NewtonDiverged, JacobianSingular };

struct FdResult {
    FdStatus status = FdStatus::Ok;
    SolutionProfile profile;
    int continuation_reached = 0;  ///< homotopy level reached on failure
};

/// Damped-Newton solve of the piecewise-linear weak form. With `truncated`,
/// the thickness factor is clamped to [-k, k] before the shift by H.
FdResult solve_fd(const ProblemSpec& spec, const FdConfig& config, bool truncated = false,
                  double k = 0.0);

/// Sup and discrete-L2 distance of the u values. Grids must be nested
/// dyadically (or equal); the coarser profile is compared at shared nodes.
std::pair<double, double> compare_profiles(const SolutionProfile& a, const SolutionProfile& b);

}  // namespace slopeflow
