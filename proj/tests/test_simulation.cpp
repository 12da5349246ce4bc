#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chns/errors.hpp"
#include "chns/oracle.hpp"
#include "chns/output.hpp"
#include "chns/simulation.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace chns;

TEST_CASE("presets satisfy the initial-data hypotheses") {
    const GridSpec g(32, 32, 1.0, 1.0);

    PresetParams p;
    p.n0 = 2.0;
    p.v0 = 3.0;
    const InitialFields uni = initial_presets("uniform", g, p);
    CHECK(uni.n(5, 5) == 2.0);
    CHECK(uni.v(9, 1) == 3.0);
    CHECK(testutil::max_abs(uni.u) == 0.0);

    const InitialFields pert = initial_presets("perturbed", g);
    CHECK(integrate(pert.n) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(min_value(pert.n) >= 0.0);

    const InitialFields bump = initial_presets("bump", g);
    CHECK(min_value(bump.v) > 0.0);
    CHECK(min_value(bump.n) > 0.0); // positive background below the bump
    CHECK(integrate(bump.n) == doctest::Approx(0.05).epsilon(1e-12));

    const InitialFields vort = initial_presets("vortex", g);
    double dinf = 0.0;
    for (double x : divergence(vort.u).data)
        dinf = std::max(dinf, std::abs(x));
    CHECK(dinf <= 1e-12);
    for (int j = 0; j < g.ny; ++j) {
        CHECK(vort.u.ux(0, j) == 0.0);
        CHECK(vort.u.ux(g.nx, j) == 0.0);
    }

    CHECK_THROWS_AS(initial_presets("swirl", g), ConfigError);
}

TEST_CASE("identically vanishing n0 is rejected at load") {
    const GridSpec g(16, 16, 1.0, 1.0);
    PresetParams p;
    p.n0 = 0.0;
    CHECK_THROWS_AS(initial_presets("uniform", g, p), ConfigError);
}

TEST_CASE("smallness report compares masses against thresholds") {
    SimConfig cfg;
    cfg.nx = cfg.ny = 16;
    cfg.preset = "uniform";
    cfg.n0 = 0.05;
    cfg.v0 = 0.2;
    cfg.delta_n = 0.1;
    cfg.delta_v = 0.1;
    const SmallnessReport rep = check_smallness(cfg);
    CHECK(rep.mass_n0 == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(rep.mass_v0 == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(rep.K == doctest::Approx(0.2));
    CHECK(rep.n0_below_delta);
    CHECK_FALSE(rep.v0_below_delta);
}

TEST_CASE("homogeneous decay run matches exp(-t)") {
    SimConfig cfg;
    cfg.nx = cfg.ny = 16;
    cfg.preset = "uniform";
    cfg.n0 = 1.0;
    cfg.v0 = 1.0;
    cfg.mu = 0.0;
    cfg.t_end = 1.0;
    cfg.dt_fixed = 1e-4;
    cfg.cfl = 1.0;
    cfg.output_every = 0.5;
    cfg.detect_convergence = false;
    cfg.linear_solve_tol = 1e-13;
    const RunSummary sum = run(cfg);
    REQUIRE(sum.termination == Termination::ReachedEnd);
    const double ev = std::exp(-1.0);
    for (double x : sum.state.v.data)
        CHECK(x == doctest::Approx(ev).epsilon(1e-4));
    for (double x : sum.state.n.data)
        CHECK(x == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(testutil::max_abs(sum.state.u) <= 1e-8);
}

TEST_CASE("homogeneous logistic run matches the closed form") {
    SimConfig cfg;
    cfg.nx = cfg.ny = 16;
    cfg.preset = "uniform";
    cfg.n0 = 2.0;
    cfg.v0 = 1.0;
    cfg.mu = 1.0;
    cfg.t_end = 1.0;
    cfg.dt_fixed = 1e-4;
    cfg.cfl = 1.0;
    cfg.output_every = 0.5;
    cfg.detect_convergence = false;
    cfg.linear_solve_tol = 1e-13;
    const RunSummary sum = run(cfg);
    REQUIRE(sum.termination == Termination::ReachedEnd);

    const UniformPoint ref = uniform_state_solution(2.0, 1.0, 1.0, 1.0);
    const auto [rk_n, rk_v] = testutil::rk4_homogeneous(2.0, 1.0, 1.0, 1.0);
    CHECK(ref.n == doctest::Approx(rk_n).epsilon(1e-10));
    CHECK(ref.v == doctest::Approx(rk_v).epsilon(1e-10));
    for (double x : sum.state.n.data)
        CHECK(x == doctest::Approx(ref.n).epsilon(1e-4));
    for (double x : sum.state.v.data)
        CHECK(x == doctest::Approx(ref.v).epsilon(1e-4));

    // Boundedness monitors from the same run.
    CHECK(sum.max_v_increase <= 1e-12);
    CHECK(sum.min_v_seen > 0.0);
    CHECK(sum.max_div_u <= 1e-8);
    double max_l2 = 0.0;
    for (const DiagnosticsRecord& r : sum.series)
        max_l2 = std::max(max_l2, r.l2_dist_n);
    CHECK(std::isfinite(max_l2));
    for (const DiagnosticsRecord& r : sum.series)
        CHECK(r.max_v <= sum.series.front().max_v * (1.0 + 1e-12));
}

TEST_CASE("identical configs give identical diagnostics bytes") {
    SimConfig cfg;
    cfg.nx = cfg.ny = 16;
    cfg.preset = "perturbed";
    cfg.n0 = 1.0;
    cfg.n0_amplitude = 0.1;
    cfg.v0 = 0.1;
    cfg.mu = 1.0;
    cfg.t_end = 0.05;
    cfg.output_every = 0.01;
    cfg.detect_convergence = false;
    const RunSummary a = run(cfg);
    const RunSummary b = run(cfg);
    REQUIRE(a.termination == Termination::ReachedEnd);
    CHECK(diagnostics_csv(a.series) == diagnostics_csv(b.series));
}

TEST_CASE("convergence detection terminates a settled run") {
    SimConfig cfg;
    cfg.nx = cfg.ny = 16;
    cfg.preset = "uniform";
    cfg.n0 = 1.0;
    cfg.v0 = 1e-4; // already below the w1inf threshold
    cfg.mu = 1.0;
    cfg.t_end = 5.0;
    cfg.output_every = 0.01;
    cfg.detect_convergence = true;
    const RunSummary sum = run(cfg);
    CHECK(sum.termination == Termination::Converged);
    CHECK(sum.state.t < 5.0);
}

TEST_CASE("record hook fires at every output time") {
    SimConfig cfg;
    cfg.nx = cfg.ny = 16;
    cfg.preset = "uniform";
    cfg.t_end = 0.1;
    cfg.output_every = 0.02;
    cfg.detect_convergence = false;
    int count = 0;
    double last_t = -1.0;
    const RunSummary sum = run(cfg, [&](const SimState& s, const DiagnosticsRecord& r) {
        ++count;
        CHECK(s.t == r.t);
        CHECK(r.t > last_t);
        last_t = r.t;
    });
    CHECK(count == static_cast<int>(sum.series.size()));
    CHECK(count == 6); // t = 0 plus five intervals
    CHECK(sum.series.back().t == doctest::Approx(0.1));
}
