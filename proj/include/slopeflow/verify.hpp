/**
 * @file verify.hpp
 * @brief Theorem-as-test checks: maximum principles on computed profiles and
 * the scalar structural inequalities behind the existence argument.
 *
 * Each check returns a pass flag plus a concrete witness (a node, a value,
 * or a parameter tuple) so a failure is immediately reproducible. Checks
 * whose hypotheses do not apply report Skipped rather than failing.
 */

#pragma once

#include <string>
#include <vector>

#include "slopeflow/problem.hpp"
#include "slopeflow/profile.hpp"

namespace slopeflow {

enum class CheckOutcome { Pass, Fail, Skipped };

struct CheckResult {
    std::string name;
    CheckOutcome outcome = CheckOutcome::Skipped;
    double witness_value = 0.0;  ///< margin / extremum backing the verdict
    double witness_x = 0.0;      ///< location or parameter of the extremum
    std::string note;
};

/// Weak maximum principle: f >= 0 implies u >= 0. Passes iff the nodal
/// minimum of u is >= -1e-10; skipped when f takes negative values or p <= 2.
CheckResult wmp_check(const ProblemSpec& spec, const SolutionProfile& profile);

/// Strong maximum principle, following its proof route: f >= 0 and f != 0
/// imply (a) u > 0 strictly at interior nodes, (b) the Green's function of
/// the linearization is positive, and (c) the linear solve reproduces u
/// within the given fixed-point tolerance. Skipped when f has negative
/// values, f == 0, or p <= 2.
CheckResult smp_check(const ProblemSpec& spec, const SolutionProfile& profile,
                      const GreensTable& table, double fixed_point_tol);

/// Margin of the scalar inequality
///   (|x|^(p-2)x - |y|^(p-2)y)(x - y) >= 2^(2-p) |x - y|^p,  p >= 2.
/// Nonnegative up to round-off for all x, y.
double simon_inequality_check(double x, double y, double p);

/// Coercivity constant mu = -min(0, min_s psi(s)) with
/// psi(s) = |s + tan phi|^(p-2)(s + tan phi)s - |s|^p / 2, located by dense
/// scan plus golden-section refinement. Finite and >= 0; for p = 2 it equals
/// tan^2(phi)/2 exactly.
double coercivity_gap(const ProblemSpec& spec);

/// Margin of the monotonicity bound of the truncated main part:
///   (a(r,s) - a(r,s~))(s - s~) >= 2^(2-p) (H + T_k(r)) (cos phi)^(p-1) |s - s~|^p
/// with a(r,s) = (H + T_k(r)) (cos phi)^(p-1) phi_pow(p, s + tan phi).
/// Requires 0 < k < H so the thickness factor stays positive.
double main_part_monotonicity_check(double r, double s, double s_tilde,
                                    const ProblemSpec& spec, double k);

struct VerificationReport {
    std::vector<CheckResult> checks;
    std::string scenario_hash;
    double fixed_point_tol = 0.0;

    bool all_passed() const;  ///< no non-skipped failures
    std::string to_json() const;
    std::string to_table() const;  ///< human-readable text table
};

/// Runs every applicable check on a solved scenario.
VerificationReport verify_scenario(const ProblemSpec& spec, const SolutionProfile& profile,
                                   double fixed_point_tol, unsigned seed);

}  // namespace slopeflow
