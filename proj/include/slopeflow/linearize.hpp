/**
 * @file linearize.hpp
 * @brief Diffusion coefficient of the linearization at a computed solution.
 *
 * For p > 2 a solved profile u induces the linear operator
 *   L v = -(D v')' - (sin phi)^(p-1) v'
 * with D(x) = (u + H)(p-1) int_0^1 |sin phi + theta u' cos phi|^(p-2) dtheta
 * times cos phi. This module tabulates D, certifies its lower bound, and
 * exposes the two scalar inequalities the construction rests on.
 */

#pragma once

#include "slopeflow/problem.hpp"
#include "slopeflow/profile.hpp"

namespace slopeflow {

/// Tabulates D(x) at the profile's nodes and attaches the strongest
/// certified floor that applies: the nonnegative-source floor, else the
/// uniform floor from the smallness condition, else the min-head floor
/// built from the measured minimum of u + H. Requires p > 2 and a profile
/// that stays above the bed.
DiffusionProfile build_diffusion(const ProblemSpec& spec, const SolutionProfile& profile);

/// (p-1) int_0^1 |1 + theta a|^(p-2) dtheta, which stays >= 1/2 for every
/// real a when p > 2. Throws for p <= 2.
double lemma_half_bound(double a, double p);

/// Residual of the zero-order Taylor identity
///   phi_pow(p,a) - phi_pow(p,b) = (p-1) int_0^1 |b + theta(a-b)|^(p-2) dtheta (a-b):
/// returns the absolute difference of the two sides. Small for all inputs;
/// exercised as a property check on the closed-form theta integral.
double taylor_remainder_check(double a, double b, double p);

}  // namespace slopeflow
