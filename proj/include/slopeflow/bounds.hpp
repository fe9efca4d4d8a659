/**
 * @file bounds.hpp
 * @brief Source-condition check and the explicit a priori constants.
 *
 * Everything here is an executable version of an explicit formula: the
 * double-minimum positivity condition on f, the sup-norm bound on u, the
 * smallness condition guaranteeing existence, the uniform diffusion floor,
 * and the derivative bounds.
 */

#pragma once

#include <optional>
#include <string>
#include <utility>

#include "slopeflow/problem.hpp"
#include "slopeflow/profile.hpp"

namespace slopeflow {

enum class HfVerdict { Holds, Fails, Indeterminate };

struct HfResult {
    HfVerdict verdict = HfVerdict::Indeterminate;
    double min_value = 0.0;
    double argmin_x0 = 0.0;
    double argmin_x = 0.0;
    bool fast_path = false;  ///< decided by the f >= 0 shortcut

    bool holds() const { return verdict == HfVerdict::Holds; }
};

/// Evaluates the double minimum over x0 in [-1,1], x in [x0,1] of
///   H^(p/(p-1)) + p/((p-1) cos phi) * int_x^1 phi_pow(p', int_{x0}^tau f) dtau
/// on a tensor grid with golden-section refinement around the discrete
/// argmin. The inner integral is exact; the outer one composite Simpson.
/// f >= 0 short-circuits to Holds. |min| <= 1e-10 reports Indeterminate.
HfResult check_hf(const ProblemSpec& spec, int resolution = 256);

/// As above but with the f >= 0 shortcut controllable (used to cross-check
/// the shortcut against the grid evaluation).
HfResult check_hf(const ProblemSpec& spec, int resolution, bool allow_fast_path);

/// ||f||_1 / (sin phi)^(p-1); upper-bounds ||u||_inf of any weak solution
/// when the HF condition holds.
double sup_norm_bound(const ProblemSpec& spec);

/// True iff ||f||_1 < H (sin phi)^(p-1) strictly.
bool existence_condition(const ProblemSpec& spec);

/// Certified lower bound on the linearization diffusion D(x), p > 2 only:
/// H/2 (sin phi)^(p-2) cos phi when f >= 0, else the uniform floor from
/// the existence condition. Throws if neither hypothesis applies.
double diffusion_floor(const ProblemSpec& spec);

struct DerivativeBounds {
    double end_bound = 0.0;      ///< bound on |u'(1)|
    double uniform_bound = 0.0;  ///< bound on ||u'||_inf
};

/// Derivative bounds for p > 2. The end bound depends on the sign of u'(1)
/// taken from the profile; the uniform bound combines the diffusion floor
/// with the explicit D(1) bound and is infinite when beta reaches the
/// smallness threshold. beta defaults to ||f||_1.
DerivativeBounds derivative_bounds(const ProblemSpec& spec, const SolutionProfile& profile,
                                   std::optional<double> beta = std::nullopt);

/// Flat report of every bound; serializes to a flat JSON object.
struct BoundsReport {
    bool hf_holds = false;
    double hf_min_value = 0.0;
    double hf_argmin_x0 = 0.0;
    double hf_argmin_x = 0.0;
    double sup_bound = 0.0;
    bool existence_ok = false;
    double margin_beta = 0.0;
    double K_prime = 0.0;
    double du_end_bound = 0.0;
    double du_uniform_bound = 0.0;

    std::string to_json() const;
};

/// Everything at once for a solved profile.
BoundsReport bounds_report(const ProblemSpec& spec, const SolutionProfile& profile,
                           std::optional<double> beta = std::nullopt);

}  // namespace slopeflow
