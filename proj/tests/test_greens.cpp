#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "slopeflow/greens.hpp"
#include "slopeflow/linearize.hpp"
#include "slopeflow/steady.hpp"

using namespace slopeflow;

namespace {

DiffusionProfile constant_diffusion(int n, double D0) {
    DiffusionProfile D;
    D.grid = Grid::uniform(n);
    D.D.assign(n + 1, D0);
    D.floor_used = D0;
    return D;
}

// Green's function of -D0 u'' - lambda u' with zero Dirichlet data on [-1,1],
// derived independently: homogeneous branches A(1 - e^{-r(x+1)}) on the left
// and B(e^{-r(x-1)} - 1) on the right with r = lambda/D0, glued by continuity
// and the derivative jump -1/D0 at y.
struct ClosedFormGreen {
    double r, lambda;

    explicit ClosedFormGreen(double D0, double lam) : r(lam / D0), lambda(lam) {}

    std::pair<double, double> coefficients(double y) const {
        // A (1 - e^{-r(y+1)}) - B (e^{-r(y-1)} - 1) = 0
        // A e^{-r(y+1)}      + B e^{-r(y-1)}       = 1/lambda
        const double el = std::exp(-r * (y + 1.0)), er = std::exp(-r * (y - 1.0));
        const double a11 = 1.0 - el, a12 = -(er - 1.0);
        const double a21 = el, a22 = er;
        const double det = a11 * a22 - a12 * a21;
        return {-a12 / (lambda * det), a11 / (lambda * det)};
    }

    double eval(double x, double y) const {
        const auto [A, B] = coefficients(y);
        if (x <= y) return A * (1.0 - std::exp(-r * (x + 1.0)));
        return B * (std::exp(-r * (x - 1.0)) - 1.0);
    }

    double max_abs_dx() const {
        // |dG/dx| is A r e^{-r(x+1)} on the left branch (max at x = -1) and
        // B r e^{-r(x-1)} on the right branch (max at x = y). As y tends to
        // either endpoint both branch maxima tend to r/lambda = 1/D0, which
        // is the supremum; the scan covers the interior.
        double best = r / lambda;
        const int m = 8192;
        for (int j = 1; j < m; ++j) {
            const double y = -1.0 + 2.0 * j / m;
            const auto [A, B] = coefficients(y);
            best = std::max(best, std::abs(A) * r);
            best = std::max(best, std::abs(B) * r * std::exp(-r * (y - 1.0)));
        }
        return best;
    }
};

ProblemSpec golden_spec() {
    ProblemSpec spec;
    spec.p = 3.0;
    spec.H = 1.0;
    spec.phi = 0.2;
    spec.source = SourceFunction::constant(0.05);
    return spec;
}

}  // namespace

TEST_CASE("exponential weights: constant diffusion closed form") {
    const double D0 = 0.5, lambda = 0.5;  // lambda / D0 = 1
    const DiffusionProfile D = constant_diffusion(256, D0);
    const auto [em, ep] = exp_weights(D, lambda);
    for (std::size_t i = 0; i < em.size(); ++i) {
        const double s = D.grid.nodes[i];
        CHECK(em[i] == doctest::Approx(std::exp(-(s + 1.0))).epsilon(1e-12));
        CHECK(ep[i] == doctest::Approx(std::exp(1.0 - s)).epsilon(1e-12));
    }
}

TEST_CASE("exponential weights: endpoint identities and ordering") {
    const ShootResult shoot = solve_steady(golden_spec(), Grid::uniform(256));
    REQUIRE(shoot.status == ShootStatus::Ok);
    const DiffusionProfile D = build_diffusion(golden_spec(), shoot.profile);
    const auto [em, ep] = exp_weights(D, golden_spec().lambda());
    CHECK(em.front() == 1.0);
    CHECK(ep.back() == 1.0);
    for (std::size_t i = 1; i + 1 < em.size(); ++i) {
        CHECK(em[i] > 0.0);
        CHECK(em[i] < 1.0);
        CHECK(ep[i] > 1.0);
    }
    CHECK_THROWS(exp_weights(D, -1.0));
    DiffusionProfile bad = D;
    bad.D[3] = 0.0;
    CHECK_THROWS(exp_weights(bad, golden_spec().lambda()));
}

TEST_CASE("weight gap lower bound") {
    // E_plus(s) - E_minus(s) >= 1 - exp(-int_{-1}^1 lambda/D) > 0.
    const ShootResult shoot = solve_steady(golden_spec(), Grid::uniform(256));
    REQUIRE(shoot.status == ShootStatus::Ok);
    const DiffusionProfile D = build_diffusion(golden_spec(), shoot.profile);
    const double lambda = golden_spec().lambda();
    const GreensTable table = build_greens(D, lambda);

    double total = 0.0;
    for (std::size_t i = 1; i < D.D.size(); ++i)
        total += 0.5 * (D.grid.nodes[i] - D.grid.nodes[i - 1]) *
                 (lambda / D.D[i - 1] + lambda / D.D[i]);
    const double floor = 1.0 - std::exp(-total);
    CHECK(floor > 0.0);
    for (int i = 0; i < table.n_nodes(); ++i)
        CHECK(table.E_plus[i] - table.E_minus[i] >= floor - 1e-12);
}

TEST_CASE("point evaluation: boundary rows vanish, branches agree on the diagonal") {
    const GreensTable table = build_greens(constant_diffusion(128, 0.4), 0.3);
    for (double y : {-0.7, -0.1, 0.4, 0.9}) {
        CHECK(std::abs(green_eval(table, -1.0, y)) <= 1e-14);
        CHECK(std::abs(green_eval(table, 1.0, y)) <= 1e-14);
        const double lo = green_eval(table, y - 1e-13, y);
        const double hi = green_eval(table, y + 1e-13, y);
        CHECK(lo == doctest::Approx(hi).epsilon(1e-10));
    }
    CHECK_THROWS(green_eval(table, 1.5, 0.0));
}

TEST_CASE("constant diffusion matches the closed-form kernel") {
    const double D0 = 0.35, lambda = 0.22;
    const GreensTable table = build_greens(constant_diffusion(1024, D0), lambda);
    const ClosedFormGreen exact(D0, lambda);
    double worst = 0.0;
    for (double x : {-0.9, -0.5, -0.123, 0.0, 0.25, 0.6, 0.95})
        for (double y : {-0.8, -0.33, 0.1, 0.44, 0.77})
            worst = std::max(worst,
                             std::abs(green_eval(table, x, y) - exact.eval(x, y)));
    CHECK(worst <= 1e-8);
}

TEST_CASE("positivity scan") {
    const GreensTable table = build_greens(constant_diffusion(128, 0.4), 0.3);
    const auto [gmin, argmin] = positivity_scan(table);
    CHECK(gmin > 0.0);
    // Boundary rows and columns are exactly zero but excluded from the scan.
    CHECK(table.g(0, 5) == 0.0);
    CHECK(table.g(table.n_nodes() - 1, 5) == 0.0);
}

TEST_CASE("Lipschitz constant: closed-form comparison and property sweep") {
    const double D0 = 0.35, lambda = 0.22;
    const GreensTable table = build_greens(constant_diffusion(2048, D0), lambda);
    const double kappa = lipschitz_estimate(table);
    const ClosedFormGreen exact(D0, lambda);
    CHECK(kappa == doctest::Approx(exact.max_abs_dx()).epsilon(1e-6));

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> xy(-1.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double s = xy(rng), t = xy(rng), y = xy(rng);
        const double lhs = std::abs(green_eval(table, s, y) - green_eval(table, t, y));
        CHECK(lhs <= kappa * std::abs(s - t) * (1.0 + 1e-8) + 1e-14);
    }
}

TEST_CASE("linear solve by the kernel") {
    SUBCASE("zero source gives zero") {
        const GreensTable table = build_greens(constant_diffusion(128, 0.4), 0.3);
        const SolutionProfile u = green_solve(table, SourceFunction());
        CHECK(u.sup_norm_u() == 0.0);
    }

    SUBCASE("constant diffusion, unit source: closed form") {
        const double D0 = 0.35, lambda = 0.22;
        const GreensTable table = build_greens(constant_diffusion(1024, D0), lambda);
        const SolutionProfile u = green_solve(table, SourceFunction::constant(1.0));
        // -D0 u'' - lambda u' = 1, u(+-1) = 0:
        //   u = -x/lambda + alpha + beta e^{-lambda x / D0}.
        const double q = lambda / D0;
        const double beta = -2.0 / (lambda * (std::exp(q) - std::exp(-q)));
        const double alpha = 1.0 / lambda - beta * std::exp(-q);
        double worst = 0.0;
        for (std::size_t i = 0; i < u.u.size(); ++i) {
            const double x = u.grid.nodes[i];
            const double exact = -x / lambda + alpha + beta * std::exp(-q * x);
            worst = std::max(worst, std::abs(u.u[i] - exact));
        }
        CHECK(worst <= 1e-8);
    }

    SUBCASE("nonnegative nonzero source is strictly positive inside") {
        const GreensTable table = build_greens(constant_diffusion(256, 0.4), 0.3);
        const SourceFunction bump({{-1.0, 0.0, Polynomial{{0.0}}},
                                   {0.0, 0.5, Polynomial{{0.1}}},
                                   {0.5, 1.0, Polynomial{{0.0}}}});
        const SolutionProfile u = green_solve(table, bump);
        for (std::size_t i = 1; i + 1 < u.u.size(); ++i) CHECK(u.u[i] > 0.0);
        CHECK(u.u.front() == 0.0);
        CHECK(u.u.back() == 0.0);
    }
}

TEST_CASE("fixed point of the linearization") {
    SUBCASE("zero source") {
        ProblemSpec spec = golden_spec();
        spec.source = SourceFunction();
        const ShootResult shoot = solve_steady(spec, Grid::uniform(128));
        REQUIRE(shoot.status == ShootStatus::Ok);
        CHECK(fixed_point_check(spec, shoot.profile) <= 1e-12);
    }

    SUBCASE("golden scenario under refinement") {
        const ProblemSpec spec = golden_spec();
        const ShootResult coarse = solve_steady(spec, Grid::uniform(1024));
        REQUIRE(coarse.status == ShootStatus::Ok);
        CHECK(fixed_point_check(spec, coarse.profile) <= 1e-4);
        const ShootResult fine = solve_steady(spec, Grid::uniform(2048));
        REQUIRE(fine.status == ShootStatus::Ok);
        CHECK(fixed_point_check(spec, fine.profile) <= 1e-5);
    }
}

TEST_CASE("table exports") {
    const GreensTable table = build_greens(constant_diffusion(32, 0.4), 0.3);
    CHECK(dump_matrix(table).size() == 33u * 33u * sizeof(double));
    CHECK(header_json(table).find("grid_hash") != std::string::npos);
    CHECK(weights_csv(table).rfind("x,E_minus,E_plus\n", 0) == 0);
}
