#include "slopeflow/linearize.hpp"

#include <cmath>
#include <stdexcept>

#include "slopeflow/bounds.hpp"
#include "slopeflow/power.hpp"

namespace slopeflow {

DiffusionProfile build_diffusion(const ProblemSpec& spec, const SolutionProfile& profile) {
    spec.validate();
    if (spec.p <= 2.0) throw std::domain_error("build_diffusion: requires p > 2");
    if (profile.min_head <= 0.0)
        throw std::invalid_argument("build_diffusion: profile touches the bed");

    const double cphi = std::cos(spec.phi), sphi = std::sin(spec.phi);
    DiffusionProfile out;
    out.grid = profile.grid;
    out.D.resize(profile.u.size());
    for (std::size_t i = 0; i < profile.u.size(); ++i) {
        out.D[i] = (profile.u[i] + spec.H) * (spec.p - 1.0) *
                   theta_integral(sphi, profile.du[i] * cphi, spec.p) * cphi;
    }

    if (spec.source.is_nonnegative()) {
        out.floor_used = 0.5 * spec.H * spec.sin_phi_pow(spec.p - 2.0) * cphi;
        out.floor_name = "nonnegative-source";
    } else if (existence_condition(spec)) {
        out.floor_used = diffusion_floor(spec);
        out.floor_name = "uniform";
    } else {
        out.floor_used = 0.5 * profile.min_head * spec.sin_phi_pow(spec.p - 2.0) * cphi;
        out.floor_name = "min-head";
    }
    return out;
}

double lemma_half_bound(double a, double p) {
    if (p <= 2.0) throw std::domain_error("lemma_half_bound: requires p > 2");
    return (p - 1.0) * theta_integral(1.0, a, p);
}

double taylor_remainder_check(double a, double b, double p) {
    if (p <= 1.0) throw std::domain_error("taylor_remainder_check: requires p > 1");
    const double lhs = phi_pow(p, a) - phi_pow(p, b);
    const double rhs = (p - 1.0) * theta_integral(b, a - b, p) * (a - b);
    return std::abs(lhs - rhs);
}

}  // namespace slopeflow
