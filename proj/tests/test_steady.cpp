#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "slopeflow/power.hpp"
#include "slopeflow/steady.hpp"

using namespace slopeflow;

namespace {

ProblemSpec golden_spec() {
    ProblemSpec spec;
    spec.p = 3.0;
    spec.H = 1.0;
    spec.phi = 0.2;
    spec.source = SourceFunction::constant(0.05);
    return spec;
}

}  // namespace

TEST_CASE("trial trajectory: zero source, zero slope stays flat") {
    ProblemSpec spec = golden_spec();
    spec.source = SourceFunction();
    const TrialTrajectory t = integrate_profile(spec, 0.0, Grid::uniform(64));
    CHECK(t.feasible);
    CHECK(t.endpoint == doctest::Approx(0.0).epsilon(1e-14));
    for (double v : t.profile.u) CHECK(std::abs(v) <= 1e-14);
}

TEST_CASE("trial trajectory: zero source, nonzero slope misses") {
    ProblemSpec spec = golden_spec();
    spec.source = SourceFunction();
    const TrialTrajectory t = integrate_profile(spec, 0.25, Grid::uniform(64));
    CHECK(std::abs(t.endpoint) > 1e-3);
}

TEST_CASE("steady solve: zero source gives the zero solution") {
    ProblemSpec spec = golden_spec();
    spec.source = SourceFunction();
    const ShootResult r = solve_steady(spec, Grid::uniform(128));
    REQUIRE(r.status == ShootStatus::Ok);
    CHECK(std::abs(r.profile.s_end) <= 1e-10);
    CHECK(r.profile.sup_norm_u() <= 1e-10);
}

TEST_CASE("steady solve: nonnegative nonzero source is strictly positive inside") {
    const ShootResult r = solve_steady(golden_spec(), Grid::uniform(256));
    REQUIRE(r.status == ShootStatus::Ok);
    for (std::size_t i = 1; i + 1 < r.profile.u.size(); ++i) CHECK(r.profile.u[i] > 0.0);
    CHECK(r.profile.min_head > 0.0);
}

TEST_CASE("steady solve: reference end-slope regression") {
    // End slope pinned from an n=16384 solve; n=2048 must agree closely.
    const ShootResult r = solve_steady(golden_spec(), Grid::uniform(2048));
    REQUIRE(r.status == ShootStatus::Ok);
    CHECK(r.profile.s_end == doctest::Approx(-0.250781429705364).epsilon(1e-9));
}

TEST_CASE("first-order identity residual") {
    ProblemSpec spec = golden_spec();

    // Zero solution, zero source: identically satisfied.
    SolutionProfile zero;
    zero.grid = Grid::uniform(64);
    zero.u.assign(65, 0.0);
    zero.du.assign(65, 0.0);
    zero.s_end = 0.0;
    zero.kappa = spec.H * phi_pow(spec.p, std::sin(spec.phi));
    ProblemSpec no_source = spec;
    no_source.source = SourceFunction();
    CHECK(first_order_residual(no_source, zero) <= 1e-14);

    // The shooting profile satisfies the identity to near round-off.
    const ShootResult r = solve_steady(spec, Grid::uniform(2048));
    REQUIRE(r.status == ShootStatus::Ok);
    const double tol = 1e-8 * (1.0 + spec.source.l1_norm());
    CHECK(first_order_residual(spec, r.profile) <= tol);
    CHECK(r.profile.residual_first_order <= tol);

    // Sensitivity: a small interior hat bump (perturbing u and, consistently,
    // its derivative on the flanks) must be detected.
    SolutionProfile bumped = r.profile;
    const std::size_t mid = bumped.u.size() / 2;
    const double h = bumped.grid.spacing(static_cast<int>(mid));
    bumped.u[mid] += 1e-3;
    bumped.du[mid - 1] += 1e-3 / h;
    bumped.du[mid + 1] -= 1e-3 / h;
    CHECK(first_order_residual(spec, bumped) > 1e-4);
}

TEST_CASE("infeasible trial slopes are flagged, not fatal") {
    ProblemSpec spec = golden_spec();
    spec.H = 0.05;
    spec.source = SourceFunction::constant(3.0);
    // Strong recharge forces a steep backward slope that drives the head
    // into the bed away from the right boundary.
    const TrialTrajectory t = integrate_profile(spec, 0.0, Grid::uniform(64));
    CHECK_FALSE(t.feasible);
}

TEST_CASE("profile CSV round trip") {
    const ShootResult r = solve_steady(golden_spec(), Grid::uniform(128));
    REQUIRE(r.status == ShootStatus::Ok);
    const SolutionProfile back = SolutionProfile::from_csv(r.profile.to_csv());
    REQUIRE(back.u.size() == r.profile.u.size());
    for (std::size_t i = 0; i < back.u.size(); ++i) {
        CHECK(back.grid.nodes[i] == doctest::Approx(r.profile.grid.nodes[i]).epsilon(1e-16));
        CHECK(back.u[i] == doctest::Approx(r.profile.u[i]).epsilon(1e-16));
        CHECK(back.du[i] == doctest::Approx(r.profile.du[i]).epsilon(1e-16));
    }
}

TEST_CASE("sup-norm bound holds for solved scenarios") {
    for (double p : {2.5, 3.0, 4.0}) {
        for (double phi : {0.1, 0.3}) {
            ProblemSpec spec = golden_spec();
            spec.p = p;
            spec.phi = phi;
            const double lambda = std::pow(std::sin(phi), p - 1.0);
            spec.source = SourceFunction::constant(0.2 * lambda);  // small vs threshold
            const ShootResult r = solve_steady(spec, Grid::uniform(256));
            REQUIRE(r.status == ShootStatus::Ok);
            CHECK(r.profile.sup_norm_u() <= spec.source.l1_norm() / lambda + 1e-9);
        }
    }
}
