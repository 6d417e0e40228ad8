#include "raildyn/config.hpp"
#include "raildyn/csv.hpp"
#include "raildyn/manifest.hpp"
#include "raildyn/postprocess.hpp"
#include "raildyn/spectral.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace raildyn;

namespace {

struct Flags {
    std::string config;
    std::string pulse;
    std::string method;
    std::string out;
    int sections = -1;
    double td = -1.0;
    double p0_tonnes = -1.0;
    double dt = -1.0;
    double duration = -1.0;
    bool undamped = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "configuration file (key = value sections)");
    cmd->add_option("--sections", f.sections, "number of track sections N");
    cmd->add_option("--pulse", f.pulse, "pulse shape")
        ->check(CLI::IsMember({"rect", "sine"}));
    cmd->add_option("--td", f.td, "pulse duration (s)");
    cmd->add_option("--p0-tonnes", f.p0_tonnes, "load amplitude (tonnes-force)");
    cmd->add_option("--method", f.method, "solver")
        ->check(CLI::IsMember({"modal", "state", "newmark"}));
    cmd->add_option("--dt", f.dt, "time step (s)");
    cmd->add_option("--duration", f.duration, "total simulated time (s)");
    cmd->add_option("--out", f.out, "output directory (default $RAILDYN_OUT or ./out)");
    cmd->add_flag("--undamped", f.undamped, "drop every damping source");
}

std::string resolve_out(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("RAILDYN_OUT"); env && *env) return env;
    return "out";
}

ScenarioConfig make_config(const Flags& f) {
    ScenarioConfig cfg = f.config.empty() ? ScenarioConfig{} : load_config(f.config);
    if (f.sections > 0) cfg.sections = f.sections;
    if (!f.pulse.empty())
        cfg.pulse_kind = f.pulse == "sine" ? PulseKind::half_sine : PulseKind::rectangular;
    if (f.td > 0.0) cfg.t_d = f.td;
    if (f.p0_tonnes > 0.0) {
        cfg.p0_tonnes = f.p0_tonnes;
        cfg.p0_entered_newtons = false;
    }
    if (!f.method.empty()) {
        if (f.method == "modal") cfg.method = SolveMethod::modal_undamped;
        else if (f.method == "state") cfg.method = SolveMethod::state_space;
        else cfg.method = SolveMethod::newmark;
    }
    if (f.dt > 0.0) cfg.dt = f.dt;
    if (f.duration > 0.0) cfg.duration = f.duration;
    if (f.undamped) cfg.undamped = true;
    cfg.out_dir = resolve_out(f.out);
    cfg.validate();
    return cfg;
}

std::ofstream open_artifact(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

void write_frequencies_csv(const fs::path& path, const ModalBasis& basis) {
    auto out = open_artifact(path);
    csv::write_row(out, {"mode", "frequency_hz"});
    for (int i = 0; i < basis.n(); ++i) {
        const double hz = std::sqrt(std::max(0.0, basis.omega_sq[i])) / (2.0 * M_PI);
        csv::write_row(out, {std::to_string(i + 1), csv::cell(hz)});
    }
}

void write_response_csv(const fs::path& path, const ResponseHistory& hist, int dof) {
    auto out = open_artifact(path);
    csv::write_row(out, {"time_s", "displacement_m", "velocity_m_s"});
    for (int k = 0; k < hist.grid.samples(); ++k)
        csv::write_row(out, {csv::cell(hist.grid.t(k)), csv::cell(hist.U(dof, k)),
                             csv::cell(hist.V(dof, k))});
}

void write_sleeper_loads_csv(const fs::path& path, const SubstructureLoads& loads) {
    auto out = open_artifact(path);
    csv::write_row(out, {"sleeper", "peak_N", "percent_of_load",
                         "impulse_share_percent", "transmitted_peak_N"});
    for (int s = 0; s < loads.n_sleepers(); ++s)
        csv::write_row(out, {std::to_string(s + 1), csv::cell(loads.peak[s]),
                             csv::cell(loads.percent[s]),
                             csv::cell(loads.impulse_share[s]),
                             csv::cell(loads.transmitted_peak[s])});
}

void write_repartition_csv(const fs::path& path, const RepartitionTable& table) {
    auto out = open_artifact(path);
    std::vector<std::string> header{"sleeper"};
    header.insert(header.end(), table.labels.begin(), table.labels.end());
    csv::write_row(out, header);
    for (std::size_t r = 0; r < table.sleepers.size(); ++r) {
        std::vector<std::string> row{std::to_string(table.sleepers[r])};
        for (int c = 0; c < table.percent.cols(); ++c)
            row.push_back(table.cell(static_cast<int>(r), c));
        csv::write_row(out, row);
    }
}

/// 1-based number of the sleeper nearest to the loaded rail node.
int loaded_sleeper(const AssembledSystem& system, int load_dof) {
    for (int j = 0; j < system.n_sections; ++j)
        for (int l = 0; l < 6; l += 2)
            if (system.dof_map[j][l] == load_dof) {
                const int node = 2 * j + l / 2;
                return node / 2 + 1;
            }
    throw ModelError("load DOF is not a rail translation");
}

/// Reported DOFs of a run: the loaded rail node plus every sleeper.
std::vector<int> reported_dofs(const AssembledSystem& system, int load_dof) {
    std::vector<int> dofs{load_dof};
    const auto sleepers = system.sleeper_dofs();
    dofs.insert(dofs.end(), sleepers.begin(), sleepers.end());
    return dofs;
}

struct RunOutput {
    AssembledSystem system;
    ResponseHistory history;
    SubstructureLoads loads;
};

RunOutput run_scenario(const ScenarioConfig& cfg) {
    RunOutput run;
    run.system = assemble_track(cfg.resolved_track(), cfg.sections);
    const TimeGrid grid = make_grid(cfg.resolved_dt(), cfg.resolved_duration(), cfg.t_d);
    run.history = solve(run.system, cfg.pulse(), cfg.method, grid);
    run.loads = substructure_forces(run.history, run.system);
    return run;
}

void emit_run_artifacts(const ScenarioConfig& cfg, const RunOutput& run,
                        const fs::path& dir) {
    fs::create_directories(dir);
    write_frequencies_csv(dir / "frequencies.csv",
                          modal_decompose(run.system.M, run.system.K));
    for (int dof : reported_dofs(run.system, run.history.meta.load_dof))
        write_response_csv(dir / ("response_" + std::to_string(dof) + ".csv"),
                           run.history, dof);
    write_sleeper_loads_csv(dir / "sleeper_loads.csv", run.loads);
    write_manifest(cfg, (dir / "run.json").string());
}

int cmd_frequencies(const Flags& f) {
    ScenarioConfig cfg = make_config(f);
    const AssembledSystem system = assemble_track(cfg.resolved_track(), cfg.sections);
    const ModalBasis basis = modal_decompose(system.M, system.K);

    fs::create_directories(cfg.out_dir);
    write_frequencies_csv(fs::path(cfg.out_dir) / "frequencies.csv", basis);
    write_manifest(cfg, (fs::path(cfg.out_dir) / "run.json").string());

    std::printf("%d sections, %d modes\n", cfg.sections, basis.n());
    for (int i = 0; i < basis.n(); ++i)
        std::printf("mode %2d  %12.4f Hz\n", i + 1,
                    std::sqrt(std::max(0.0, basis.omega_sq[i])) / (2.0 * M_PI));
    return 0;
}

int cmd_respond(const Flags& f) {
    ScenarioConfig cfg = make_config(f);
    const RunOutput run = run_scenario(cfg);
    emit_run_artifacts(cfg, run, cfg.out_dir);

    const PeakSummary peaks = peak_summary(run.history, run.system);
    std::printf("peak rail displacement    %12.6e m at t = %g s (%s)\n",
                peaks.rail_peak.value, peaks.rail_peak.at_time,
                peaks.rail_peak.label.c_str());
    std::printf("peak sleeper displacement %12.6e m at t = %g s (%s)\n",
                peaks.sleeper_peak.value, peaks.sleeper_peak.at_time,
                peaks.sleeper_peak.label.c_str());
    std::printf("artifacts in %s\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_repartition(const Flags& f) {
    ScenarioConfig cfg = make_config(f);

    std::vector<SubstructureLoads> cases;
    std::vector<std::string> labels;
    int center = 0;
    for (const bool damped : {false, true}) {
        for (const PulseKind kind : {PulseKind::half_sine, PulseKind::rectangular}) {
            ScenarioConfig c = cfg;
            c.pulse_kind = kind;
            c.undamped = !damped;
            const RunOutput run = run_scenario(c);
            cases.push_back(run.loads);
            labels.push_back(std::string(kind == PulseKind::half_sine ? "sine" : "rect") +
                             (damped ? " damped" : " undamped"));
            if (center == 0)
                center = loaded_sleeper(run.system, run.history.meta.load_dof);
        }
    }

    const RepartitionTable table =
        repartition_table(cases, labels, center, 3, cfg.threshold_percent);
    fs::create_directories(cfg.out_dir);
    write_repartition_csv(fs::path(cfg.out_dir) / "repartition.csv", table);
    write_manifest(cfg, (fs::path(cfg.out_dir) / "run.json").string());

    std::printf("%-8s", "sleeper");
    for (const auto& l : table.labels) std::printf("  %-14s", l.c_str());
    std::printf("\n");
    for (std::size_t r = 0; r < table.sleepers.size(); ++r) {
        std::printf("%-8d", table.sleepers[r]);
        for (int c = 0; c < table.percent.cols(); ++c)
            std::printf("  %-14s", table.cell(static_cast<int>(r), c).c_str());
        std::printf("\n");
    }
    return 0;
}

int cmd_calibrate(const Flags& f, double target_hz, double tol_hz) {
    ScenarioConfig cfg = make_config(f);
    const CalibrationResult result =
        calibrate_element_length(cfg.resolved_track(), target_hz, tol_hz);

    fs::create_directories(cfg.out_dir);
    auto out = open_artifact(fs::path(cfg.out_dir) / "calibration_sweep.csv");
    csv::write_row(out, {"L_m", "f12_hz"});
    for (const auto& p : result.sweep)
        csv::write_row(out, {csv::cell(p.L), csv::cell(p.f12)});

    if (result.found) {
        std::printf("L = %.6f m reaches f12 = %.4f Hz (target %.4f)\n", result.L,
                    result.f12, target_hz);
        std::printf("single-section modes at that L (Hz):");
        for (double hz : result.modes_hz) std::printf(" %.2f", hz);
        std::printf("\n");
    } else {
        std::printf("no element length in [0.05, 1.2] m reaches %.4f Hz\n", target_hz);
        std::printf("%s\n", result.message.c_str());
        std::printf("f12(L) sweep written to %s/calibration_sweep.csv\n",
                    cfg.out_dir.c_str());
    }
    return result.found ? 0 : 3;
}

int cmd_compare_pulses(const Flags& f) {
    ScenarioConfig cfg = make_config(f);

    ScenarioConfig sine_cfg = cfg;
    sine_cfg.pulse_kind = PulseKind::half_sine;
    sine_cfg.out_dir = (fs::path(cfg.out_dir) / "sine").string();
    ScenarioConfig rect_cfg = cfg;
    rect_cfg.pulse_kind = PulseKind::rectangular;
    rect_cfg.out_dir = (fs::path(cfg.out_dir) / "rect").string();

    const RunOutput sine = run_scenario(sine_cfg);
    emit_run_artifacts(sine_cfg, sine, sine_cfg.out_dir);
    const RunOutput rect = run_scenario(rect_cfg);
    emit_run_artifacts(rect_cfg, rect, rect_cfg.out_dir);

    const PeakSummary sine_peaks = peak_summary(sine.history, sine.system);
    const PeakSummary rect_peaks = peak_summary(rect.history, rect.system);

    fs::create_directories(cfg.out_dir);
    auto out = open_artifact(fs::path(cfg.out_dir) / "pulse_delta.csv");
    csv::write_row(out, {"dof", "label", "peak_sine_m", "peak_rect_m", "rect_over_sine"});
    for (int dof : reported_dofs(sine.system, sine.history.meta.load_dof)) {
        const PeakEntry& ps = sine_peaks.entries[dof];
        const PeakEntry& pr = rect_peaks.entries[dof];
        const double ratio = std::abs(ps.value) > 0.0
                                 ? std::abs(pr.value) / std::abs(ps.value)
                                 : 0.0;
        csv::write_row(out, {std::to_string(dof), ps.label, csv::cell(ps.value),
                             csv::cell(pr.value), csv::cell(ratio)});
    }

    std::printf("rail peak: sine %12.6e m, rect %12.6e m\n", sine_peaks.rail_peak.value,
                rect_peaks.rail_peak.value);
    std::printf("sleeper peak: sine %12.6e m, rect %12.6e m\n",
                sine_peaks.sleeper_peak.value, rect_peaks.sleeper_peak.value);
    std::printf("artifacts in %s\n", cfg.out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transient dynamics of a ballasted railway track"};
    app.require_subcommand(1);

    Flags flags;
    double target_hz = 0.0, tol_hz = 0.01;

    CLI::App* freq = app.add_subcommand("frequencies", "natural frequency report");
    add_common(freq, flags);
    CLI::App* respond = app.add_subcommand("respond", "transient response to one pulse");
    add_common(respond, flags);
    CLI::App* repart =
        app.add_subcommand("repartition", "per-sleeper load table, four cases");
    add_common(repart, flags);
    CLI::App* calib =
        app.add_subcommand("calibrate", "search the element length for a target f12");
    add_common(calib, flags);
    calib->add_option("--target-hz", target_hz, "target mean of modes 1-2 (Hz)")
        ->required();
    calib->add_option("--tol-hz", tol_hz, "acceptance tolerance (Hz)");
    CLI::App* compare =
        app.add_subcommand("compare-pulses", "both pulse shapes plus a delta report");
    add_common(compare, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (freq->parsed()) return cmd_frequencies(flags);
        if (respond->parsed()) return cmd_respond(flags);
        if (repart->parsed()) return cmd_repartition(flags);
        if (calib->parsed()) return cmd_calibrate(flags, target_hz, tol_hz);
        if (compare->parsed()) return cmd_compare_pulses(flags);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
