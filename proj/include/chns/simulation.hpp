#pragma once

#include "chns/chemo.hpp"
#include "chns/diagnostics.hpp"
#include "chns/fields.hpp"
#include "chns/motility.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace chns {

// Full run description. Mirrors the config document; see config.hpp for the parser.
struct SimConfig {
    // [grid]
    int nx = 64, ny = 64;
    double lx = 1.0, ly = 1.0;

    // [model]
    std::string motility_family = "linear"; // linear | saturating | exponential | tabulated
    double motility_param = 1.0;
    std::string motility_table_path;
    std::string motility_table_text; // loaded table contents (tabulated only)
    double mu = 0.0;
    int kappa = 1;
    double gravity = 1.0;

    // [initial]
    std::string preset = "uniform"; // uniform | perturbed | bump | vortex, or initial_file
    std::string initial_file;
    double n0 = 1.0;
    double v0 = 1.0;
    double n0_amplitude = 0.1; // perturbed: cosine amplitude
    double n0_mass = 0.05;     // bump: total mass after scaling
    double n0_background = 1e-6; // bump: positive background level relative to peak
    double vortex_strength = 0.1;

    // [time]
    double t_end = 1.0;
    double cfl = 0.9;
    double dt_fixed = 0.0; // 0 = adaptive only
    double linear_solve_tol = 1e-10;
    double poisson_tol = 1e-10;
    int max_solver_iter = 50000;

    // [output]
    double output_every = 0.05;
    double snapshot_every = 0.0; // 0 = no snapshots
    double c_f1 = 1.0;
    double c_f2_multiplier = 1.0;
    bool detect_convergence = true;
    double converge_l2_n = 0.05;
    double converge_w1inf_v = 1e-3;
    double converge_w12_u = 1e-3;

    // [smallness] (negative = default to 0.1*area resp. 0.05*area)
    double delta_n = -1.0;
    double delta_v = -1.0;

    std::vector<std::string> defaulted_keys; // filled by the parser, echoed in run logs

    GridSpec grid() const { return GridSpec(nx, ny, lx, ly); }
    double delta_n_value() const { return delta_n >= 0.0 ? delta_n : 0.1 * lx * ly; }
    double delta_v_value() const { return delta_v >= 0.0 ? delta_v : 0.05 * lx * ly; }
};

struct SimState {
    SimState(const GridSpec& g) : n(g), v(g), pressure(g), u(g) {}

    double t = 0.0;
    ScalarField n, v, pressure;
    StaggeredVectorField u;
    long step_count = 0;
};

struct InitialFields {
    ScalarField n, v;
    StaggeredVectorField u;
};

struct SmallnessReport {
    double mass_n0 = 0.0;
    double mass_v0 = 0.0;
    double K = 0.0; // ||v0||_inf
    double delta_n = 0.0, delta_v = 0.0;
    bool n0_below_delta = false;
    bool v0_below_delta = false;
};

enum class Termination { ReachedEnd, Converged, Error };

struct RunSummary {
    RunSummary(const GridSpec& g) : state(g) {}

    SimState state;
    std::vector<DiagnosticsRecord> series;
    SmallnessReport smallness;
    Termination termination = Termination::ReachedEnd;
    std::string message;
    double wall_seconds = 0.0;
    long steps = 0;

    // Per-step monitors (tighter than the per-record series).
    double max_rel_mass_drift = 0.0; // |mass - mass0| / mass0 over all steps
    double max_mass_n = 0.0;
    double max_v_increase = 0.0;     // max over steps of (new max v - previous max v)
    double min_v_seen = 0.0;
    double min_n_seen = 0.0;
    double max_div_u = 0.0;
};

// Build the motility function described by the config (reads the table file if the
// table text was not preloaded).
Motility make_motility(const SimConfig& config);

struct PresetParams {
    double n0 = 1.0;
    double v0 = 1.0;
    double n0_amplitude = 0.1;
    double n0_mass = 0.05;
    double n0_background = 1e-6;
    double vortex_strength = 0.1;
};

// Named initial states: v0 > 0 pointwise, n0 >= 0 and not identically zero, u0
// discretely divergence-free and no-slip.
InitialFields initial_presets(const std::string& name, const GridSpec& grid,
                              const PresetParams& params = {});

// Initial fields for a config (preset, or snapshot file with u re-projected).
InitialFields make_initial(const SimConfig& config);

// Masses of the initial data and K = ||v0||_inf against the configured thresholds.
// Reports only; never blocks a run.
SmallnessReport check_smallness(const SimConfig& config);

// Advance from t=0 to t_end (or convergence, or error). Deterministic for a fixed
// config. `on_record` fires at every output time with the freshly appended record.
using RecordHook = std::function<void(const SimState&, const DiagnosticsRecord&)>;
RunSummary run(const SimConfig& config, const RecordHook& on_record = {});

} // namespace chns
