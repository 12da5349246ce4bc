#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chns/chemo.hpp"
#include "chns/errors.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace chns;

namespace {

ChemoParams tight_params(double mu = 0.0) {
    ChemoParams p;
    p.mu = mu;
    p.linear_solve_tol = 1e-13;
    return p;
}

} // namespace

TEST_CASE("uniform state is a fixed point of step_n (mu = 0)") {
    const GridSpec g(16, 16, 1.0, 1.0);
    const ScalarField n(g, 1.0), v(g, 0.7);
    const StaggeredVectorField u(g);
    const Motility m = Motility::linear(1.0);
    const ScalarField out = step_n(n, v, u, m, tight_params(), 1e-3);
    for (double x : out.data)
        CHECK(x == 1.0);
}

TEST_CASE("logistic update matches the closed form and an ODE oracle") {
    const GridSpec g(8, 8, 1.0, 1.0);
    const ScalarField n(g, 2.0), v(g, 1.0);
    const StaggeredVectorField u(g);
    const Motility m = Motility::linear(1.0);
    const ScalarField out = step_n(n, v, u, m, tight_params(1.0), 1.0);

    const double e = std::exp(1.0);
    const double closed = 2.0 * e / (2.0 * e - 1.0); // n0 e^t / (1 + n0(e^t - 1)) at t = 1
    const auto [rk_n, rk_v] = testutil::rk4_homogeneous(2.0, 1.0, 1.0, 1.0);
    CHECK(closed == doctest::Approx(rk_n).epsilon(1e-10));
    CHECK(closed == doctest::Approx(1.225399).epsilon(1e-5));
    for (double x : out.data)
        CHECK(x == doctest::Approx(closed).epsilon(1e-12));
    (void)rk_v;
}

TEST_CASE("mass identity under transport (mu = 0)") {
    const GridSpec g(32, 32, 1.0, 1.0);
    ScalarField n = testutil::random_field(g, 0.5, 1.5, 21);
    ScalarField v = testutil::random_field(g, 0.3, 0.9, 22);
    const StaggeredVectorField u = testutil::stream_velocity(g, 0.2);
    const Motility m = Motility::linear(1.0);
    const ChemoParams p = tight_params();
    const double mass0 = integrate(n);
    double prev = mass0;
    for (int k = 0; k < 5; ++k) {
        const double dt = stable_dt(n, v, u, m, 0.9);
        n = step_n(n, v, u, m, p, dt);
        v = step_v(n, v, u, p, dt);
        const double mass = integrate(n);
        REQUIRE(std::abs(mass - prev) <= 10.0 * p.linear_solve_tol * mass0); // per step
        REQUIRE(std::abs(mass - mass0) <= 1e-9 * mass0);                     // cumulative
        prev = mass;
    }
}

TEST_CASE("mass stays below the logistic ceiling (mu > 0)") {
    const GridSpec g(16, 16, 1.0, 1.0);
    ScalarField n = testutil::random_field(g, 2.5, 3.5, 31);
    ScalarField v = testutil::random_field(g, 0.2, 0.5, 32);
    const StaggeredVectorField u = testutil::stream_velocity(g, 0.1);
    const Motility m = Motility::linear(1.0);
    const ChemoParams p = tight_params(1.0);
    const double cap = std::max(integrate(n), g.area());
    for (int k = 0; k < 20; ++k) {
        const double dt = stable_dt(n, v, u, m, 0.9);
        n = step_n(n, v, u, m, p, dt);
        v = step_v(n, v, u, p, dt);
        REQUIRE(integrate(n) <= cap * (1.0 + 1e-8));
    }
}

TEST_CASE("outputs stay strictly positive") {
    const GridSpec g(16, 16, 1.0, 1.0);
    ScalarField n = testutil::random_field(g, 1e-6, 2.0, 41);
    ScalarField v = testutil::random_field(g, 1e-4, 1.0, 42);
    const StaggeredVectorField u = testutil::stream_velocity(g, 0.4);
    const Motility m = Motility::exponential(1.0);
    const ChemoParams p = tight_params(0.5);
    for (int k = 0; k < 10; ++k) {
        const double dt = stable_dt(n, v, u, m, 1.0);
        n = step_n(n, v, u, m, p, dt);
        v = step_v(n, v, u, p, dt);
        REQUIRE(min_value(n) > 0.0);
        REQUIRE(min_value(v) > 0.0);
    }
}

TEST_CASE("uniform consumption matches exp(-t)") {
    const GridSpec g(8, 8, 1.0, 1.0);
    const ScalarField n(g, 1.0), v(g, 1.0);
    const StaggeredVectorField u(g);
    const ScalarField out = step_v(n, v, u, tight_params(), 1.0);
    for (double x : out.data)
        CHECK(x == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("pure heat step obeys the maximum principle") {
    const GridSpec g(16, 16, 1.0, 1.0);
    const ScalarField n(g, 1e-300); // consumption at the positivity floor
    const ScalarField v = testutil::random_field(g, 0.2, 1.4, 51);
    const StaggeredVectorField u(g);
    const ScalarField out = step_v(n, v, u, tight_params(), 0.05);
    CHECK(max_value(out) <= max_value(v) * (1.0 + 1e-12));
    CHECK(min_value(out) >= min_value(v) * (1.0 - 1e-12));
}

TEST_CASE("signal maximum never grows, signal mass never grows") {
    const GridSpec g(16, 16, 1.0, 1.0);
    ScalarField n = testutil::random_field(g, 0.5, 1.5, 61);
    ScalarField v = testutil::random_field(g, 0.4, 1.0, 62);
    const StaggeredVectorField u = testutil::stream_velocity(g, 0.3);
    const Motility m = Motility::saturating(1.0);
    const ChemoParams p = tight_params();
    for (int k = 0; k < 10; ++k) {
        const double dt = stable_dt(n, v, u, m, 0.9);
        const double vmax = max_value(v), vmass = integrate(v);
        n = step_n(n, v, u, m, p, dt);
        v = step_v(n, v, u, p, dt);
        REQUIRE(max_value(v) <= vmax * (1.0 + 1e-12));
        REQUIRE(integrate(v) <= vmass * (1.0 + 1e-12));
    }
}

TEST_CASE("stable_dt: degenerate signal still gives a finite step") {
    const GridSpec g(16, 16, 1.0, 1.0);
    const ScalarField n(g, 1.0), v(g, 1e-30);
    const StaggeredVectorField u(g);
    const double dt = stable_dt(n, v, u, Motility::linear(1.0), 0.9);
    CHECK(dt > 0.0);
    CHECK(std::isfinite(dt));
}

TEST_CASE("stable_dt: advective bound") {
    const GridSpec g(100, 100, 1.0, 1.0); // h = 0.01
    const ScalarField n(g, 1.0), v(g, 1e-30);
    StaggeredVectorField u(g);
    for (double& x : u.ux_)
        x = 1.0;
    const double dt = stable_dt(n, v, u, Motility::linear(1.0), 0.5);
    CHECK(dt == doctest::Approx(0.005).epsilon(1e-9));

    StaggeredVectorField u2 = u;
    for (double& x : u2.ux_)
        x *= 2.0;
    CHECK(stable_dt(n, v, u2, Motility::linear(1.0), 0.5) == doctest::Approx(0.5 * dt).epsilon(1e-9));
}

TEST_CASE("stable_dt: diffusive bound dominates for order-one signal") {
    const GridSpec g(64, 64, 1.0, 1.0);
    const ScalarField n(g, 1.0), v(g, 1.0);
    const StaggeredVectorField u(g);
    const double dt = stable_dt(n, v, u, Motility::linear(1.0), 1.0);
    const double h = 1.0 / 64;
    CHECK(dt == doctest::Approx(h * h / 4.0).epsilon(1e-9));
}

TEST_CASE("iteration cap raises a solver error carrying the residual") {
    const GridSpec g(16, 16, 1.0, 1.0);
    const ScalarField n = testutil::random_field(g, 0.5, 1.5, 71);
    const ScalarField v = testutil::random_field(g, 0.5, 1.5, 72);
    const StaggeredVectorField u(g);
    ChemoParams p;
    p.linear_solve_tol = 1e-13;
    p.max_solver_iter = 0;
    try {
        step_n(n, v, u, Motility::linear(1.0), p, 1e-3);
        FAIL("expected a SolverError");
    } catch (const SolverError& e) {
        CHECK(e.residual > 0.0);
        CHECK(e.iterations == 0);
    }
}

TEST_CASE("corrupted states are rejected") {
    const GridSpec g(8, 8, 1.0, 1.0);
    ScalarField n(g, 1.0), v(g, 1.0);
    const StaggeredVectorField u(g);
    const Motility m = Motility::linear(1.0);
    n(2, 2) = -0.5;
    CHECK_THROWS_AS(step_n(n, v, u, m, tight_params(), 1e-3), StateError);
    n(2, 2) = std::nan("");
    CHECK_THROWS_AS(step_v(n, v, u, tight_params(), 1e-3), StateError);
}
