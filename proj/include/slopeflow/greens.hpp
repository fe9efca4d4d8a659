/**
 * @file greens.hpp
 * @brief Exponential weights and Green's function of the linearized operator.
 *
 * For L v = -(D v')' - lambda v' with zero Dirichlet data on [-1,1] the
 * Green's function has the classical two-branch product form in the weights
 *   E_minus(s) = exp(-int_{-1}^s lambda/D),  E_plus(s) = exp(int_s^1 lambda/D),
 * which satisfy 0 < E_minus < 1 < E_plus strictly inside the interval.
 * Everything here is tabulated on the solver grid; the integrals use the
 * composite trapezoid rule, exact for the piecewise-linear D data.
 */

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "slopeflow/problem.hpp"
#include "slopeflow/profile.hpp"

namespace slopeflow {

/// Trapezoid tabulation of the weights on the D grid. E_minus(-1) = 1 and
/// E_plus(1) = 1 exactly. Throws on nonpositive D or lambda.
std::pair<std::vector<double>, std::vector<double>> exp_weights(const DiffusionProfile& D,
                                                                double lambda);

/// Builds the full table: weights plus the dense node-pair matrix
/// G[i*n+j] = G(x_i, y_j). n is capped at 4608 nodes.
GreensTable build_greens(const DiffusionProfile& D, double lambda);

/// Point evaluation of the two-branch formula, with the weights
/// interpolated between nodes (trapezoid-consistent within each cell).
double green_eval(const GreensTable& table, double x, double y);

/// Minimum of G over interior node pairs and its argmin (x_i, y_j).
std::pair<double, std::pair<double, double>> positivity_scan(const GreensTable& table);

/// Lipschitz constant of G in its first argument: the maximum of the
/// analytic branch derivatives |dG/dx| over node pairs on both triangles.
double lipschitz_estimate(const GreensTable& table);

/// Kink-splitting quadrature of u(x) = int G(x,y) f(y) dy at every node.
/// u(+-1) = 0 exactly; du by second-order differences.
SolutionProfile green_solve(const GreensTable& table, const SourceFunction& f);

/// Builds D from the profile, then G, then solves the linear problem with
/// the same source, and returns ||green_solve(f) - u||_inf. A converged
/// nonlinear solution is a fixed point of its linearization, so this must
/// vanish under refinement. Requires p > 2.
double fixed_point_check(const ProblemSpec& spec, const SolutionProfile& profile);

/// Row-major little-endian double dump of the G matrix.
std::string dump_matrix(const GreensTable& table);

/// JSON header for the matrix dump: {n, lambda, grid_hash}.
std::string header_json(const GreensTable& table);

/// CSV of the weight curves: header "x,E_minus,E_plus".
std::string weights_csv(const GreensTable& table);

}  // namespace slopeflow
