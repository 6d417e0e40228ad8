#include "raildyn/manifest.hpp"

#include <fstream>
#include <json.hpp>

namespace raildyn {

std::string manifest_json(const ScenarioConfig& cfg) {
    nlohmann::json j;

    auto& track = j["track"];
    track["rho_r_kg_m3"] = cfg.track.rho_r;
    track["A_r_cm2"] = cfg.track.A_r / 1e-4;
    track["E_r_GPa"] = cfg.track.E_r / 1e9;
    track["I_r_cm4"] = cfg.track.I_r / 1e-8;
    track["m_T_kg"] = cfg.track.m_T;
    track["k_s_MN_m"] = cfg.track.k_s / 1e6;
    track["c_s_kNs_m"] = cfg.track.c_s / 1e3;
    track["k_b_MN_m"] = cfg.track.k_b / 1e6;
    track["c_b_kNs_m"] = cfg.track.c_b / 1e3;
    track["zeta1"] = cfg.track.zeta1;
    track["zeta2"] = cfg.track.zeta2;
    track["L_m"] = cfg.track.L;
    track["sections"] = cfg.sections;

    auto& pulse = j["pulse"];
    pulse["kind"] = cfg.pulse_kind == PulseKind::half_sine ? "sine" : "rect";
    pulse["p0_N"] = cfg.p0_newtons();
    if (!cfg.p0_entered_newtons) {
        pulse["p0_tonnes"] = cfg.p0_tonnes;
        pulse["g_m_s2"] = cfg.g;
    }
    pulse["t_d_s"] = cfg.t_d;
    pulse["omega_rad_s"] = cfg.pulse().omega;

    auto& solver = j["solver"];
    switch (cfg.method) {
    case SolveMethod::modal_undamped: solver["method"] = "modal"; break;
    case SolveMethod::state_space: solver["method"] = "state"; break;
    case SolveMethod::newmark: solver["method"] = "newmark"; break;
    }
    solver["dt_s"] = cfg.resolved_dt();
    solver["duration_s"] = cfg.resolved_duration();
    solver["undamped"] = cfg.undamped;

    auto& output = j["output"];
    output["dir"] = cfg.out_dir;
    output["threshold_percent"] = cfg.threshold_percent;

    return j.dump(2) + "\n";
}

void write_manifest(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write manifest " + path);
    out << manifest_json(cfg);
}

} // namespace raildyn
