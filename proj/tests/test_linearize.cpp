#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "slopeflow/linearize.hpp"
#include "slopeflow/bounds.hpp"
#include "slopeflow/steady.hpp"

using namespace slopeflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

SolutionProfile zero_profile(int n) {
    SolutionProfile prof;
    prof.grid = Grid::uniform(n);
    prof.u.assign(n + 1, 0.0);
    prof.du.assign(n + 1, 0.0);
    prof.min_head = 1.0;
    return prof;
}

}  // namespace

TEST_CASE("diffusion of the zero profile is the constant H (p-1) (sin phi)^(p-2) cos phi") {
    ProblemSpec spec;
    spec.p = 3.0;
    spec.H = 1.0;
    spec.phi = 0.2;
    SolutionProfile prof = zero_profile(64);
    prof.min_head = spec.H;
    const DiffusionProfile D = build_diffusion(spec, prof);
    const double expected = spec.H * (spec.p - 1.0) *
                            std::pow(std::sin(spec.phi), spec.p - 2.0) *
                            std::cos(spec.phi);
    for (double v : D.D) CHECK(v == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("diffusion floor certificates hold on solved profiles") {
    SUBCASE("nonnegative source") {
        ProblemSpec spec;
        spec.p = 4.0;
        spec.H = 1.0;
        spec.phi = kPi / 4.0;
        spec.source = SourceFunction::constant(0.02);
        const ShootResult shoot = solve_steady(spec, Grid::uniform(512));
        REQUIRE(shoot.status == ShootStatus::Ok);
        const DiffusionProfile D = build_diffusion(spec, shoot.profile);
        CHECK(D.floor_name == "nonnegative-source");
        CHECK(D.floor_used == doctest::Approx(0.176776695296636881).epsilon(1e-12));
        CHECK(D.min_D() >= D.floor_used);
    }
    SUBCASE("sign-changing source under the smallness condition") {
        ProblemSpec spec;
        spec.p = 3.0;
        spec.H = 1.0;
        spec.phi = 0.45;
        spec.source = SourceFunction::polynomial({0.0, 0.02});  // f(x) = 0.02 x
        REQUIRE(existence_condition(spec));
        const ShootResult shoot = solve_steady(spec, Grid::uniform(512));
        REQUIRE(shoot.status == ShootStatus::Ok);
        const DiffusionProfile D = build_diffusion(spec, shoot.profile);
        CHECK(D.floor_name == "uniform");
        CHECK(D.floor_used == doctest::Approx(diffusion_floor(spec)).epsilon(1e-14));
        CHECK(D.min_D() >= D.floor_used);
    }
}

TEST_CASE("diffusion is continuous: adjacent jumps vanish under refinement") {
    ProblemSpec spec;
    spec.p = 3.0;
    spec.H = 1.0;
    spec.phi = 0.5;
    spec.source = SourceFunction::constant(0.05);
    double prev_jump = 0.0;
    for (int n : {128, 256, 512}) {
        const ShootResult shoot = solve_steady(spec, Grid::uniform(n));
        REQUIRE(shoot.status == ShootStatus::Ok);
        const DiffusionProfile D = build_diffusion(spec, shoot.profile);
        double jump = 0.0;
        for (std::size_t i = 1; i < D.D.size(); ++i)
            jump = std::max(jump, std::abs(D.D[i] - D.D[i - 1]));
        if (prev_jump > 0.0) CHECK(jump < prev_jump);
        prev_jump = jump;
    }
}

TEST_CASE("diffusion requires p > 2 and a wet profile") {
    ProblemSpec spec;
    spec.p = 2.0;
    CHECK_THROWS(build_diffusion(spec, zero_profile(32)));
    spec.p = 3.0;
    SolutionProfile dry = zero_profile(32);
    dry.min_head = 0.0;
    CHECK_THROWS(build_diffusion(spec, dry));
}

TEST_CASE("half lower bound of the averaged power integral") {
    CHECK(lemma_half_bound(0.0, 4.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(lemma_half_bound(-2.0, 3.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(lemma_half_bound(-2.0, 2.5) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(lemma_half_bound(0.5, 2.0), std::domain_error);

    // Dense scan: the bound >= 1/2 holds over a wide argument range.
    for (double p : {2.1, 2.5, 3.0, 4.0, 6.0, 8.0}) {
        double lowest = 1e300;
        for (int i = 0; i <= 2000; ++i) {
            const double a = -50.0 + 100.0 * i / 2000.0;
            lowest = std::min(lowest, lemma_half_bound(a, p));
        }
        CHECK(lowest >= 0.5 - 1e-12);
    }
}

TEST_CASE("zero-order Taylor identity of the odd power") {
    CHECK(taylor_remainder_check(1.0, 1.0, 3.0) <= 1e-14);
    CHECK(taylor_remainder_check(2.0, 0.0, 3.0) <= 1e-12);

    std::mt19937 rng(21);
    std::uniform_real_distribution<double> ab(-5.0, 5.0), p_dist(2.1, 6.0);
    for (int i = 0; i < 20000; ++i) {
        const double a = ab(rng), b = ab(rng), p = p_dist(rng);
        const double scale = std::pow(std::max({1.0, std::abs(a), std::abs(b)}), p - 1.0);
        CHECK(taylor_remainder_check(a, b, p) <= 1e-10 * scale);
    }
}
