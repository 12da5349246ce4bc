#include "chns/simulation.hpp"

#include "chns/errors.hpp"
#include "chns/fluid.hpp"
#include "chns/output.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace chns {

namespace {

double div_inf(const StaggeredVectorField& u) {
    const GridSpec& g = u.grid;
    double m = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = (u.ux(i + 1, j) - u.ux(i, j)) / g.hx +
                             (u.uy(i, j + 1) - u.uy(i, j)) / g.hy;
            m = std::max(m, std::abs(d));
        }
    return m;
}

void validate_initial(const InitialFields& f) {
    if (!all_finite(f.n) || !all_finite(f.v) || !all_finite(f.u))
        throw ConfigError("initial data contains non-finite values");
    if (!(min_value(f.v) > 0.0))
        throw ConfigError("v0 must be strictly positive everywhere");
    if (min_value(f.n) < 0.0)
        throw ConfigError("n0 must be nonnegative");
    if (!(integrate(f.n) > 0.0))
        throw ConfigError("n0 must not vanish identically");
    if (div_inf(f.u) > 1e-8)
        throw ConfigError("u0 must be discretely divergence-free (tolerance 1e-8)");
}

} // namespace

Motility make_motility(const SimConfig& config) {
    const std::string& fam = config.motility_family;
    if (fam == "linear")
        return Motility::linear(config.motility_param);
    if (fam == "saturating")
        return Motility::saturating(config.motility_param);
    if (fam == "exponential")
        return Motility::exponential(config.motility_param);
    if (fam == "tabulated") {
        std::string text = config.motility_table_text;
        if (text.empty()) {
            if (config.motility_table_path.empty())
                throw ConfigError("tabulated motility needs motility_table");
            std::ifstream in(config.motility_table_path);
            if (!in)
                throw IoError("cannot open motility table: " + config.motility_table_path);
            std::ostringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        return Motility::tabulated(text);
    }
    throw ConfigError("unknown motility family '" + fam +
                      "' (admissible: linear, saturating, exponential, tabulated)");
}

InitialFields initial_presets(const std::string& name, const GridSpec& grid,
                              const PresetParams& p) {
    InitialFields f{ScalarField(grid), ScalarField(grid), StaggeredVectorField(grid)};
    const double pi = 3.14159265358979323846;

    if (name == "uniform") {
        for (double& x : f.n.data)
            x = p.n0;
        for (double& x : f.v.data)
            x = p.v0;
    } else if (name == "perturbed") {
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                f.n(i, j) = p.n0 + p.n0_amplitude * std::cos(pi * grid.xc(i) / grid.lx) *
                                       std::cos(pi * grid.yc(j) / grid.ly);
        for (double& x : f.v.data)
            x = p.v0;
    } else if (name == "bump") {
        const double cx = 0.5 * grid.lx, cy = 0.5 * grid.ly;
        const double R = 0.2 * std::min(grid.lx, grid.ly);
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) {
                const double dx = grid.xc(i) - cx, dy = grid.yc(j) - cy;
                const double r2 = (dx * dx + dy * dy) / (R * R);
                const double bump = r2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
                f.n(i, j) = bump + p.n0_background;
            }
        const double raw = integrate(f.n);
        for (double& x : f.n.data)
            x *= p.n0_mass / raw;
        for (double& x : f.v.data)
            x = p.v0;
    } else if (name == "vortex") {
        for (double& x : f.n.data)
            x = p.n0;
        for (double& x : f.v.data)
            x = p.v0;
        // u = curl of a stream function vanishing (with its gradient) on the walls;
        // the discrete curl on nodes is exactly solenoidal.
        auto psi = [&](int i, int j) {
            const double sx = std::sin(pi * i * grid.hx / grid.lx);
            const double sy = std::sin(pi * j * grid.hy / grid.ly);
            return p.vortex_strength * sx * sx * sy * sy;
        };
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i <= grid.nx; ++i)
                f.u.ux(i, j) = (psi(i, j + 1) - psi(i, j)) / grid.hy;
        for (int j = 0; j <= grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                f.u.uy(i, j) = -(psi(i + 1, j) - psi(i, j)) / grid.hx;
        f.u.pin_boundary();
    } else {
        throw ConfigError("unknown initial preset '" + name + "'");
    }
    validate_initial(f);
    return f;
}

InitialFields make_initial(const SimConfig& config) {
    const GridSpec grid = config.grid();
    if (!config.initial_file.empty()) {
        const Snapshot snap = read_snapshot(config.initial_file);
        const bool same_grid = snap.grid.nx == grid.nx && snap.grid.ny == grid.ny &&
                               std::abs(snap.grid.lx - grid.lx) <= 1e-12 * grid.lx &&
                               std::abs(snap.grid.ly - grid.ly) <= 1e-12 * grid.ly;
        if (!same_grid)
            throw ConfigError("initial snapshot grid does not match the config grid");
        InitialFields f{snap.n, snap.v, StaggeredVectorField(grid)};
        // Center-stored velocity back to faces, then re-project to restore discrete
        // incompressibility (the snapshot averaging is lossy).
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 1; i < grid.nx; ++i)
                f.u.ux(i, j) = 0.5 * (snap.ucx(i - 1, j) + snap.ucx(i, j));
        for (int j = 1; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                f.u.uy(i, j) = 0.5 * (snap.ucy(i, j - 1) + snap.ucy(i, j));
        FluidParams fp(config.kappa, gravity_potential(grid, config.gravity));
        fp.poisson_tol = config.poisson_tol;
        fp.poisson_max_iter = config.max_solver_iter;
        f.u = pressure_project(f.u, 1.0, fp).u;
        validate_initial(f);
        return f;
    }
    PresetParams p;
    p.n0 = config.n0;
    p.v0 = config.v0;
    p.n0_amplitude = config.n0_amplitude;
    p.n0_mass = config.n0_mass;
    p.n0_background = config.n0_background;
    p.vortex_strength = config.vortex_strength;
    return initial_presets(config.preset, config.grid(), p);
}

SmallnessReport check_smallness(const SimConfig& config) {
    const InitialFields f = make_initial(config);
    SmallnessReport r;
    r.mass_n0 = integrate(f.n);
    r.mass_v0 = integrate(f.v);
    r.K = max_value(f.v);
    r.delta_n = config.delta_n_value();
    r.delta_v = config.delta_v_value();
    r.n0_below_delta = r.mass_n0 < r.delta_n;
    r.v0_below_delta = r.mass_v0 < r.delta_v;
    return r;
}

RunSummary run(const SimConfig& config, const RecordHook& on_record) {
    const auto wall_start = std::chrono::steady_clock::now();
    const GridSpec grid = config.grid();
    RunSummary summary(grid);

    const Motility motility = make_motility(config);
    const InitialFields init = make_initial(config);
    summary.smallness = check_smallness(config);

    ChemoParams chemo;
    chemo.mu = config.mu;
    chemo.linear_solve_tol = config.linear_solve_tol;
    chemo.max_solver_iter = config.max_solver_iter;

    FluidParams fluid(config.kappa, gravity_potential(grid, config.gravity));
    fluid.poisson_tol = config.poisson_tol;
    fluid.poisson_max_iter = config.max_solver_iter;

    const double K = max_value(init.v);
    const EnergyWeights weights =
        weights_from_bounds(motility, K, config.c_f1, config.c_f2_multiplier);

    SimState state(grid);
    state.n = init.n;
    state.v = init.v;
    state.u = init.u;

    const double mass0 = integrate(state.n);
    summary.max_mass_n = mass0;
    summary.min_n_seen = min_value(state.n);
    summary.min_v_seen = min_value(state.v);
    summary.max_div_u = div_inf(state.u);
    double prev_max_v = max_value(state.v);

    summary.series.push_back(
        record(state.n, state.v, state.u, 0.0, weights, std::nullopt, 0.0, chemo.positivity_floor));
    if (on_record)
        on_record(state, summary.series.back());

    const double out_every = config.output_every > 0.0 ? config.output_every : config.t_end;
    double next_out = std::min(out_every, config.t_end);
    const double snap = 1e-12 * std::max(out_every, 1.0);

    summary.termination = Termination::ReachedEnd;
    try {
        while (state.t < config.t_end - snap) {
            double dt = stable_dt(state.n, state.v, state.u, motility, config.cfl);
            if (config.dt_fixed > 0.0)
                dt = std::min(dt, config.dt_fixed);
            const double target = std::min(next_out, config.t_end);
            bool hit = false;
            if (state.t + dt >= target - snap) {
                dt = target - state.t;
                hit = true;
            }

            ProjectedVelocity pv = step_u(state.u, state.n, fluid, dt, &state.pressure);
            state.u = std::move(pv.u);
            state.pressure = std::move(pv.pressure);
            state.n = step_n(state.n, state.v, state.u, motility, chemo, dt);
            state.v = step_v(state.n, state.v, state.u, chemo, dt);
            state.t = hit ? target : state.t + dt;
            ++state.step_count;

            const double mass = integrate(state.n);
            summary.max_rel_mass_drift =
                std::max(summary.max_rel_mass_drift, std::abs(mass - mass0) / mass0);
            summary.max_mass_n = std::max(summary.max_mass_n, mass);
            const double maxv = max_value(state.v);
            summary.max_v_increase = std::max(summary.max_v_increase, maxv - prev_max_v);
            prev_max_v = maxv;
            const double minv = min_value(state.v);
            const double minn = min_value(state.n);
            summary.min_v_seen = std::min(summary.min_v_seen, minv);
            summary.min_n_seen = std::min(summary.min_n_seen, minn);
            summary.max_div_u = std::max(summary.max_div_u, div_inf(state.u));
            if (!(minv > 0.0))
                throw StateError("signal positivity lost at t = " + std::to_string(state.t));
            if (minn < 0.0)
                throw StateError("cell density negative at t = " + std::to_string(state.t));

            if (hit) {
                const DiagnosticsRecord& prev = summary.series.back();
                const double rec_dt = state.t - prev.t;
                summary.series.push_back(record(state.n, state.v, state.u, state.t, weights,
                                                prev, rec_dt, chemo.positivity_floor));
                if (on_record)
                    on_record(state, summary.series.back());
                if (target >= next_out - snap)
                    next_out += out_every;
                const DiagnosticsRecord& r = summary.series.back();
                if (config.detect_convergence && r.l2_dist_n <= config.converge_l2_n &&
                    r.w1inf_v <= config.converge_w1inf_v && r.w12_u <= config.converge_w12_u) {
                    summary.termination = Termination::Converged;
                    summary.message = "convergence thresholds reached at t = " +
                                      std::to_string(state.t);
                    break;
                }
            }
        }
    } catch (const std::exception& e) {
        summary.termination = Termination::Error;
        summary.message = e.what();
    }

    summary.state = std::move(state);
    summary.steps = summary.state.step_count;
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return summary;
}

} // namespace chns
