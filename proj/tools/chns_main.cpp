#include "chns/config.hpp"
#include "chns/errors.hpp"
#include "chns/oracle.hpp"
#include "chns/output.hpp"
#include "chns/simulation.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

int run_command(const std::string& config_path, double t_end_override, const std::string& out_dir) {
    chns::SimConfig cfg = chns::load_config(config_path);
    if (t_end_override > 0.0)
        cfg.t_end = t_end_override;
    std::filesystem::create_directories(out_dir);

    double next_snapshot = cfg.snapshot_every;
    int snapshot_id = 0;
    chns::RecordHook hook;
    if (cfg.snapshot_every > 0.0) {
        hook = [&](const chns::SimState& state, const chns::DiagnosticsRecord&) {
            if (state.t + 1e-12 >= next_snapshot || state.t == 0.0) {
                char name[64];
                std::snprintf(name, sizeof name, "snapshot_%04d.vtk", snapshot_id++);
                chns::write_snapshot(state, out_dir + "/" + name);
                while (next_snapshot <= state.t + 1e-12)
                    next_snapshot += cfg.snapshot_every;
            }
        };
    }

    const chns::RunSummary sum = chns::run(cfg, hook);

    chns::write_diagnostics_csv(sum.series, out_dir + "/diagnostics.csv");
    chns::write_snapshot(sum.state, out_dir + "/final_state.vtk");

    std::ofstream log(out_dir + "/run.log");
    log << "# resolved configuration\n" << chns::serialize_config(cfg);
    if (!cfg.defaulted_keys.empty()) {
        log << "# defaulted keys\n";
        for (const auto& k : cfg.defaulted_keys)
            log << "#   " << k << "\n";
    }
    log << "# smallness report\n";
    log << "#   mass_n0 = " << sum.smallness.mass_n0 << " (threshold " << sum.smallness.delta_n
        << ", " << (sum.smallness.n0_below_delta ? "below" : "not below") << ")\n";
    log << "#   mass_v0 = " << sum.smallness.mass_v0 << " (threshold " << sum.smallness.delta_v
        << ", " << (sum.smallness.v0_below_delta ? "below" : "not below") << ")\n";
    log << "#   K = " << sum.smallness.K << "\n";
    log << "# steps = " << sum.steps << ", wall seconds = " << sum.wall_seconds << "\n";
    log << "# max |div u| = " << sum.max_div_u << ", max rel mass drift = "
        << sum.max_rel_mass_drift << "\n";

    switch (sum.termination) {
    case chns::Termination::ReachedEnd:
        std::cout << "run finished at t = " << sum.state.t << " after " << sum.steps
                  << " steps\n";
        return 0;
    case chns::Termination::Converged:
        std::cout << "run converged: " << sum.message << "\n";
        return 0;
    case chns::Termination::Error:
        chns::write_snapshot(sum.state, out_dir + "/abort_state.vtk");
        std::cerr << "run aborted: " << sum.message << " (post-mortem state written)\n";
        return 2;
    }
    return 2;
}

int check_command(const std::string& config_path) {
    const chns::SimConfig cfg = chns::load_config(config_path);
    const chns::SmallnessReport rep = chns::check_smallness(cfg);
    std::printf("mass_n0 = %.17g\n", rep.mass_n0);
    std::printf("mass_v0 = %.17g\n", rep.mass_v0);
    std::printf("K = %.17g\n", rep.K);
    std::printf("n0 mass below delta_n (%.17g): %s\n", rep.delta_n,
                rep.n0_below_delta ? "yes" : "no");
    std::printf("v0 mass below delta_v (%.17g): %s\n", rep.delta_v,
                rep.v0_below_delta ? "yes" : "no");
    return 0;
}

int convergence_command(const std::string& study) {
    chns::ConvergenceReport rep;
    if (study == "uniform_state")
        rep = chns::convergence_order(study, {4e-3, 2e-3, 1e-3}, chns::ErrorNorm::LInf, 0.9);
    else if (study == "heat_cosine")
        rep = chns::convergence_order(study, {1.0 / 16, 1.0 / 32, 1.0 / 64},
                                      chns::ErrorNorm::LInf, 1.8);
    else
        throw chns::ConfigError("unknown study '" + study +
                                "' (available: uniform_state, heat_cosine)");
    std::printf("%-14s %-22s\n", "level", "error");
    for (std::size_t k = 0; k < rep.levels.size(); ++k)
        std::printf("%-14.8g %-22.15g\n", rep.levels[k], rep.errors[k]);
    std::printf("fitted order %.3f (target %.2f): %s\n", rep.order, rep.target,
                rep.pass ? "pass" : "FAIL");
    if (!rep.note.empty())
        std::printf("note: %s\n", rep.note.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chemotaxis-fluid simulator"};
    app.require_subcommand(1);
    app.fallthrough(); // parent options may follow the subcommand
    long seed = 0;     // accepted for interface stability; the solver is deterministic
    app.add_option("--seed", seed, "ignored (runs are deterministic)");

    std::string config_path, out_dir = "out", study;
    double t_end_override = 0.0;

    CLI::App* cmd_run = app.add_subcommand("run", "advance a configured simulation");
    cmd_run->add_option("config", config_path, "config file")->required();
    cmd_run->add_option("--t-end", t_end_override, "override t_end");
    cmd_run->add_option("--out", out_dir, "output directory");

    CLI::App* cmd_check = app.add_subcommand("check", "report initial-mass smallness");
    cmd_check->add_option("config", config_path, "config file")->required();

    CLI::App* cmd_conv = app.add_subcommand("convergence", "run a named refinement study");
    cmd_conv->add_option("study", study, "uniform_state or heat_cosine")->required();

    try {
        app.parse(argc, argv);
        if (cmd_run->parsed())
            return run_command(config_path, t_end_override, out_dir);
        if (cmd_check->parsed())
            return check_command(config_path);
        return convergence_command(study);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const chns::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
