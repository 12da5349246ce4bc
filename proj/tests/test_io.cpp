#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chns/config.hpp"
#include "chns/errors.hpp"
#include "chns/output.hpp"
#include "test_util.hpp"

#include <cstdio>
#include <filesystem>
#include <string>

using namespace chns;

TEST_CASE("minimal config fills documented defaults") {
    const SimConfig cfg = parse_config("[grid]\nnx = 64\nny = 64\nlx = 1.0\nly = 1.0\n");
    CHECK(cfg.motility_family == "linear");
    CHECK(cfg.motility_param == 1.0);
    CHECK(cfg.mu == 0.0);
    CHECK(cfg.kappa == 1);
    CHECK(cfg.preset == "uniform");
    CHECK(cfg.cfl == 0.9);
    CHECK(cfg.linear_solve_tol == 1e-10);
    CHECK(cfg.delta_n_value() == doctest::Approx(0.1));
    CHECK(cfg.delta_v_value() == doctest::Approx(0.05));
    CHECK(!cfg.defaulted_keys.empty());
    bool echoes_mu = false;
    for (const std::string& k : cfg.defaulted_keys)
        if (k.rfind("model.mu", 0) == 0)
            echoes_mu = true;
    CHECK(echoes_mu);
}

TEST_CASE("semantic violations are named") {
    CHECK_THROWS_WITH_AS(parse_config("[model]\nmu = -1\n"),
                         doctest::Contains("mu must be >= 0"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[initial]\nv0 = 0\n"),
                         doctest::Contains("v0 must be strictly positive"), ConfigError);
    CHECK_THROWS_AS(parse_config("[model]\nmotility = power\nmotility_param = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[model]\nkappa = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[time]\ncfl = 1.5\n"), ConfigError);
}

TEST_CASE("syntax errors carry line numbers") {
    try {
        parse_config("[grid]\nnx = 16\nny 16\n");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("[grid]\nnx = sixteen\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("nx = 16\n"), ConfigError); // key outside a section
}

TEST_CASE("unknown sections and keys are rejected") {
    CHECK_THROWS_WITH_AS(parse_config("[grid]\nnz = 4\n"), doctest::Contains("unknown key"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[physics]\nmu = 1\n"), doctest::Contains("unknown section"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[grid]\nnx = 8\nnx = 9\n"), doctest::Contains("duplicate"),
                         ConfigError);
}

TEST_CASE("serialize-parse round trip reproduces the config") {
    SimConfig cfg;
    cfg.nx = 48;
    cfg.ny = 24;
    cfg.lx = 2.0;
    cfg.ly = 1.0;
    cfg.motility_family = "exponential";
    cfg.motility_param = 1.5;
    cfg.mu = 0.25;
    cfg.kappa = 0;
    cfg.gravity = 9.8;
    cfg.preset = "bump";
    cfg.n0_mass = 0.07;
    cfg.v0 = 0.5;
    cfg.t_end = 2.5;
    cfg.cfl = 0.8;
    cfg.dt_fixed = 1e-3;
    cfg.linear_solve_tol = 1e-12;
    cfg.poisson_tol = 1e-11;
    cfg.output_every = 0.125;
    cfg.snapshot_every = 0.5;
    cfg.c_f1 = 2.0;
    cfg.c_f2_multiplier = 0.5;
    cfg.detect_convergence = false;
    cfg.converge_l2_n = 0.01;
    cfg.delta_n = 0.3;

    const SimConfig back = parse_config(serialize_config(cfg));
    CHECK(back.nx == cfg.nx);
    CHECK(back.ny == cfg.ny);
    CHECK(back.lx == cfg.lx);
    CHECK(back.ly == cfg.ly);
    CHECK(back.motility_family == cfg.motility_family);
    CHECK(back.motility_param == cfg.motility_param);
    CHECK(back.mu == cfg.mu);
    CHECK(back.kappa == cfg.kappa);
    CHECK(back.gravity == cfg.gravity);
    CHECK(back.preset == cfg.preset);
    CHECK(back.n0_mass == cfg.n0_mass);
    CHECK(back.v0 == cfg.v0);
    CHECK(back.t_end == cfg.t_end);
    CHECK(back.cfl == cfg.cfl);
    CHECK(back.dt_fixed == cfg.dt_fixed);
    CHECK(back.linear_solve_tol == cfg.linear_solve_tol);
    CHECK(back.poisson_tol == cfg.poisson_tol);
    CHECK(back.output_every == cfg.output_every);
    CHECK(back.snapshot_every == cfg.snapshot_every);
    CHECK(back.c_f1 == cfg.c_f1);
    CHECK(back.c_f2_multiplier == cfg.c_f2_multiplier);
    CHECK(back.detect_convergence == cfg.detect_convergence);
    CHECK(back.converge_l2_n == cfg.converge_l2_n);
    CHECK(back.delta_n == cfg.delta_n);
    // Canonical form spells out every key except unset path-valued ones.
    for (const std::string& k : back.defaulted_keys)
        CHECK((k.rfind("model.motility_table", 0) == 0 || k.rfind("initial.file", 0) == 0));
}

namespace {

std::vector<DiagnosticsRecord> sample_series() {
    const GridSpec g(8, 8, 1.0, 1.0);
    const ScalarField n(g, 1.0), v(g, 1.0);
    const StaggeredVectorField u(g);
    std::vector<DiagnosticsRecord> series;
    series.push_back(record(n, v, u, 0.0, {}, std::nullopt, 0.0));
    series.push_back(record(n, v, u, 0.5, {}, series[0], 0.5));
    return series;
}

} // namespace

TEST_CASE("diagnostics CSV layout") {
    const auto series = sample_series();
    const std::string csv = diagnostics_csv(series);
    CHECK(csv.rfind("t,mass_n,mass_v,entropy,fisher_v,quartic_v,kinetic,enstrophy,"
                    "grad_n_weighted,F1,F2,l2_dist_n,w1inf_v,w12_u,min_n,max_n,min_v,max_v,"
                    "div_u_inf,cum_quartic_v,cum_enstrophy,cum_grad_n\n",
                    0) == 0);
    CHECK(csv.back() == '\n');
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3); // header + 2 rows
    // Homogeneous state: entropy and fisher columns are exactly zero.
    const std::string row = csv.substr(csv.find('\n') + 1);
    CHECK(row.rfind("0,1,1,", 0) == 0);
    CHECK(diagnostics_csv(series) == csv); // deterministic bytes
    CHECK_THROWS_AS(diagnostics_csv({}), std::invalid_argument);
}

TEST_CASE("17 significant digits survive a write") {
    const GridSpec g(8, 8, 1.0, 1.0);
    const ScalarField n(g, 1.0 / 3.0), v(g, 1.0);
    const StaggeredVectorField u(g);
    std::vector<DiagnosticsRecord> series = {record(n, v, u, 0.0, {}, std::nullopt, 0.0)};
    const std::string csv = diagnostics_csv(series);
    char expect[40];
    std::snprintf(expect, sizeof expect, "%.17g", series[0].mass_n);
    CHECK(csv.find(expect) != std::string::npos);
}

TEST_CASE("uniform snapshot stores one value per cell") {
    const GridSpec g(4, 4, 1.0, 1.0);
    SimState state(g);
    for (double& x : state.n.data)
        x = 2.5;
    for (double& x : state.v.data)
        x = 1.0;
    const std::string path = std::filesystem::temp_directory_path() / "chns_uniform_snap.vtk";
    write_snapshot(state, path);
    const Snapshot snap = read_snapshot(path);
    std::filesystem::remove(path);
    REQUIRE(snap.n.data.size() == 16);
    for (double x : snap.n.data)
        CHECK(x == 2.5);
}

TEST_CASE("snapshot round trip") {
    const GridSpec g(8, 8, 1.0, 1.0);
    SimState state(g);
    state.t = 0.75;
    state.step_count = 42;
    state.n = testutil::random_field(g, 0.5, 1.5, 13);
    state.v = testutil::random_field(g, 0.1, 1.0, 14);
    state.pressure = testutil::random_field(g, -1.0, 1.0, 15);
    state.u = testutil::stream_velocity(g, 0.5);

    const std::string path = std::filesystem::temp_directory_path() / "chns_snapshot_test.vtk";
    write_snapshot(state, path);
    const Snapshot snap = read_snapshot(path);
    std::filesystem::remove(path);

    CHECK(snap.grid == g);
    CHECK(snap.t == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(snap.step == 42);
    CHECK(testutil::max_abs_diff(snap.n, state.n) <= 1e-15);
    CHECK(testutil::max_abs_diff(snap.v, state.v) <= 1e-15);
    CHECK(testutil::max_abs_diff(snap.pressure, state.pressure) <= 1e-15);

    // u is stored at centers: re-facing by averaging does not restore the staggered
    // field, so the discrete divergence is not preserved.
    StaggeredVectorField rebuilt(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            rebuilt.ux(i, j) = 0.5 * (snap.ucx(i - 1, j) + snap.ucx(i, j));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            rebuilt.uy(i, j) = 0.5 * (snap.ucy(i, j - 1) + snap.ucy(i, j));
    double dinf = 0.0;
    for (double x : divergence(rebuilt).data)
        dinf = std::max(dinf, std::abs(x));
    CHECK(dinf > 1e-10);

    CHECK_THROWS_AS(read_snapshot("/nonexistent/snapshot.vtk"), IoError);
}

TEST_CASE("tabulated table file is loaded relative to the config") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "chns_cfg_test";
    fs::create_directories(dir);
    {
        std::FILE* t = std::fopen((dir / "table.txt").c_str(), "w");
        for (int k = 0; k <= 200; ++k) {
            const double v = 3.0 * k / 200;
            std::fprintf(t, "%.17g %.17g\n", v, v * std::exp(-v));
        }
        std::fclose(t);
        std::FILE* c = std::fopen((dir / "run.ini").c_str(), "w");
        std::fprintf(c, "[model]\nmotility = tabulated\nmotility_table = table.txt\n");
        std::fclose(c);
    }
    const SimConfig cfg = load_config((dir / "run.ini").string());
    CHECK(cfg.motility_family == "tabulated");
    CHECK(!cfg.motility_table_text.empty());
    fs::remove_all(dir);

    CHECK_THROWS_AS(load_config("/nonexistent/run.ini"), ConfigError);
}
