/**
 * @file power.hpp
 * @brief Odd power functions and the theta-averaged power integral.
 *
 * The whole model is driven by the odd power function
 *   phi_pow(q, z) = |z|^(q-1) sign(z),  q > 1,
 * and its conjugate-exponent inverse. The theta integral
 *   int_0^1 |a + theta b|^(p-2) dtheta
 * shows up in the linearization and is evaluated in closed form.
 */

#pragma once

#include <stdexcept>

namespace slopeflow {

/// |z|^(q-1) sign(z). Odd, strictly increasing, phi_pow(q,0) = 0.
double phi_pow(double q, double z);

/// Conjugate exponent p' = p/(p-1).
double conjugate_exponent(double p);

/// Clamp to [-k, k].
double truncate(double value, double k);

/// int_0^1 |a + theta b|^(p-2) dtheta in closed form.
///
/// For |b| above a degeneracy threshold this is
/// (psi(a+b) - psi(a)) / ((p-1) b) with psi(t) = |t|^(p-2) t; below the
/// threshold the closed form loses all significance and the constant-
/// integrand limit |a|^(p-2) with a first-order correction is used.
/// Throws std::domain_error for p <= 1.
double theta_integral(double a, double b, double p);

}  // namespace slopeflow
