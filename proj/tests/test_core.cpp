#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "slopeflow/power.hpp"
#include "slopeflow/problem.hpp"
#include "slopeflow/source.hpp"

using namespace slopeflow;

TEST_CASE("odd power function") {
    CHECK(phi_pow(3.0, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(phi_pow(1.5, -4.0) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(phi_pow(2.7, 0.0) == 0.0);
    CHECK(phi_pow(2.0, -0.3) == -0.3);
    CHECK(phi_pow(4.0, -2.0) == -8.0);
    CHECK_THROWS_AS(phi_pow(1.0, 1.0), std::domain_error);

    // The fast integer-exponent paths agree with the generic formula.
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> z_dist(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const double z = z_dist(rng);
        for (double q : {2.0, 3.0, 4.0}) {
            const double generic =
                std::pow(std::abs(z), q - 1.0) * (z > 0.0 ? 1.0 : (z < 0.0 ? -1.0 : 0.0));
            CHECK(phi_pow(q, z) == doctest::Approx(generic).epsilon(1e-13));
        }
    }
}

TEST_CASE("conjugate exponent inverts the odd power") {
    CHECK(conjugate_exponent(3.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(conjugate_exponent(2.0) == doctest::Approx(2.0).epsilon(1e-15));
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> p_dist(1.1, 6.0), z_dist(-4.0, 4.0);
    for (int i = 0; i < 1000; ++i) {
        const double p = p_dist(rng), z = z_dist(rng);
        CHECK(phi_pow(conjugate_exponent(p), phi_pow(p, z)) ==
              doctest::Approx(z).epsilon(1e-10));
    }
}

TEST_CASE("truncation clamp") {
    CHECK(truncate(0.3, 1.0) == 0.3);
    CHECK(truncate(-5.0, 1.0) == -1.0);
    CHECK(truncate(truncate(7.2, 2.0), 2.0) == truncate(7.2, 2.0));  // idempotent
    CHECK_THROWS_AS(truncate(0.0, -1.0), std::domain_error);
}

TEST_CASE("theta integral closed form") {
    CHECK(theta_integral(1.0, 1.0, 4.0) == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
    CHECK(theta_integral(-2.0, 0.0, 3.0) == doctest::Approx(2.0).epsilon(1e-14));
    // int_0^1 |-1 + 2 theta| d theta = 1/2, integrand crosses zero inside.
    CHECK(theta_integral(-1.0, 2.0, 3.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(theta_integral(1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(theta_integral(0.0, 0.0, 1.5), std::domain_error);

    // Cross-check against midpoint quadrature for generic arguments.
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> ab(-3.0, 3.0), p_dist(2.1, 6.0);
    for (int i = 0; i < 300; ++i) {
        const double a = ab(rng), b = ab(rng), p = p_dist(rng);
        double quad = 0.0;
        const int m = 20000;
        for (int j = 0; j < m; ++j) {
            const double theta = (j + 0.5) / m;
            quad += std::pow(std::abs(a + theta * b), p - 2.0);
        }
        quad /= m;
        CHECK(theta_integral(a, b, p) == doctest::Approx(quad).epsilon(1e-6));
    }
}

TEST_CASE("polynomial calculus") {
    Polynomial q{{1.0, -2.0, 3.0}};  // 1 - 2x + 3x^2
    CHECK(q.eval(2.0) == doctest::Approx(9.0));
    CHECK(q.derivative().eval(2.0) == doctest::Approx(10.0));
    CHECK(q.integrate(0.0, 1.0) == doctest::Approx(1.0 - 1.0 + 1.0).epsilon(1e-14));

    Polynomial cubic{{0.0, -1.0, 0.0, 1.0}};  // x^3 - x
    const auto roots = cubic.roots_in(-2.0, 2.0);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(roots[1] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(roots[2] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("source tail integral") {
    const SourceFunction zero;
    CHECK(zero.tail(-0.3) == 0.0);
    CHECK(zero.is_zero());

    const SourceFunction c = SourceFunction::constant(0.7);
    for (double x : {-1.0, -0.25, 0.0, 0.9, 1.0})
        CHECK(c.tail(x) == doctest::Approx(0.7 * (1.0 - x)).epsilon(1e-14));

    const SourceFunction lin = SourceFunction::polynomial({0.0, 1.0});  // f(x) = x
    CHECK(lin.tail(-1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(lin.tail(0.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("source norms and sign analysis") {
    const SourceFunction lin = SourceFunction::polynomial({0.0, 1.0});
    CHECK(lin.l1_norm() == doctest::Approx(1.0).epsilon(1e-14));  // 2 * int_0^1 x
    CHECK_FALSE(lin.is_nonnegative());

    const SourceFunction sq = SourceFunction::polynomial({0.0, 0.0, 1.0});
    CHECK(sq.is_nonnegative());
    CHECK(sq.l1_norm() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    // Piecewise source compactly supported on [0, 0.5].
    const SourceFunction bump({{-1.0, 0.0, Polynomial{{0.0}}},
                               {0.0, 0.5, Polynomial{{0.1}}},
                               {0.5, 1.0, Polynomial{{0.0}}}});
    CHECK(bump.is_nonnegative());
    CHECK(bump.l1_norm() == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(bump.eval(0.25) == 0.1);
    CHECK(bump.eval(0.75) == 0.0);
    CHECK(bump.tail(-1.0) == doctest::Approx(0.05).epsilon(1e-14));
}

TEST_CASE("integral against a polynomial weight") {
    const SourceFunction c = SourceFunction::constant(2.0);
    const Polynomial hat{{1.0, 1.0}};  // 1 + x
    // int_{-1}^{0} 2 (1 + x) dx = 1
    CHECK(c.integral_against(hat, -1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("source JSON round trip") {
    const SourceFunction f({{-1.0, 0.25, Polynomial{{0.5, -1.0}}},
                            {0.25, 1.0, Polynomial{{0.0, 0.0, 2.0}}}});
    const SourceFunction g = SourceFunction::from_json(f.to_json());
    REQUIRE(g.pieces().size() == 2);
    for (double x : {-0.9, -0.1, 0.2, 0.3, 0.99})
        CHECK(g.eval(x) == doctest::Approx(f.eval(x)).epsilon(1e-15));
    CHECK(g.l1_norm() == doctest::Approx(f.l1_norm()).epsilon(1e-15));
}

TEST_CASE("grid construction and validation") {
    const Grid g = Grid::uniform(8);
    CHECK(g.n_cells() == 8);
    CHECK(g.nodes.front() == -1.0);
    CHECK(g.nodes.back() == 1.0);
    CHECK(g.spacing(0) == doctest::Approx(0.25).epsilon(1e-15));

    Grid bad;
    bad.nodes = {-1.0, 0.5, 0.25, 1.0};
    CHECK_THROWS(bad.validate());
}

TEST_CASE("problem spec invariants") {
    ProblemSpec spec;
    CHECK_NOTHROW(spec.validate());
    CHECK(spec.conj_p() * (spec.p - 1.0) == doctest::Approx(spec.p).epsilon(1e-12));
    CHECK(spec.lambda() == doctest::Approx(std::pow(std::sin(spec.phi), spec.p - 1.0)));

    ProblemSpec bad = spec;
    bad.p = 1.0;
    CHECK_THROWS(bad.validate());
    bad = spec;
    bad.H = 0.0;
    CHECK_THROWS(bad.validate());
    bad = spec;
    bad.phi = 2.0;  // >= pi/2
    CHECK_THROWS(bad.validate());
    bad = spec;
    bad.conductivity = -1.0;
    CHECK_THROWS(bad.validate());
}
