#include "raildyn/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace raildyn {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

double parse_number(const std::string& path, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError(path + ": expected a number, got \"" + value + "\"");
    if (!std::isfinite(v)) throw ConfigError(path + ": value is not finite");
    return v;
}

bool parse_bool(const std::string& path, const std::string& value) {
    const std::string v = lower(value);
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ConfigError(path + ": expected a boolean, got \"" + value + "\"");
}

PulseKind parse_kind(const std::string& path, const std::string& value) {
    const std::string v = lower(value);
    if (v == "sine" || v == "half_sine" || v == "half-sine") return PulseKind::half_sine;
    if (v == "rect" || v == "rectangular") return PulseKind::rectangular;
    throw ConfigError(path + ": expected sine or rect, got \"" + value + "\"");
}

SolveMethod parse_method(const std::string& path, const std::string& value) {
    const std::string v = lower(value);
    if (v == "modal") return SolveMethod::modal_undamped;
    if (v == "state" || v == "state_space" || v == "state-space")
        return SolveMethod::state_space;
    if (v == "newmark") return SolveMethod::newmark;
    throw ConfigError(path + ": expected modal, state or newmark, got \"" + value + "\"");
}

} // namespace

double ScenarioConfig::p0_newtons() const {
    if (p0_entered_newtons) return p0_tonnes;
    return p0_tonnes * 1000.0 * g;
}

PulseLoad ScenarioConfig::pulse() const {
    PulseLoad p = pulse_kind == PulseKind::half_sine
                      ? PulseLoad::half_sine(p0_newtons(), t_d)
                      : PulseLoad::rectangular(p0_newtons(), t_d);
    if (omega_override > 0.0) p.omega = omega_override;
    return p;
}

TrackProperties ScenarioConfig::resolved_track() const {
    return undamped ? track.undamped() : track;
}

void ScenarioConfig::validate() const {
    track.validate();
    if (sections < 1) throw ConfigError("track.sections must be at least 1");
    if (!(g > 0.0)) throw ConfigError("pulse.g_m_s2 must be strictly positive");
    if (!(t_d > 0.0)) throw ConfigError("pulse.t_d_s must be strictly positive");
    if (!(p0_newtons() > 0.0)) throw ConfigError("pulse.p0 must be strictly positive");
    if (omega_override < 0.0)
        throw ConfigError("pulse.omega_rad_s must be non-negative");
    if (dt < 0.0) throw ConfigError("solver.dt_s must be non-negative");
    if (duration < 0.0) throw ConfigError("solver.duration_s must be non-negative");
    if (!(threshold_percent >= 0.0))
        throw ConfigError("output.threshold_percent must be non-negative");
    pulse().validate();
}

ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig cfg;
    bool p0_tonnes_seen = false, p0_newtons_seen = false;

    std::istringstream in(text);
    std::string raw, section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": malformed section header");
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (section != "track" && section != "pulse" && section != "solver" &&
                section != "output")
                throw ConfigError("unknown config section [" + section + "]");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config key \"" + key + "\" appears before any section");
        const std::string path = section + "." + key;

        if (section == "track") {
            if (key == "rho_r_kg_m3") cfg.track.rho_r = parse_number(path, value);
            else if (key == "a_r_cm2") cfg.track.A_r = parse_number(path, value) * 1e-4;
            else if (key == "e_r_gpa") cfg.track.E_r = parse_number(path, value) * 1e9;
            else if (key == "i_r_cm4") cfg.track.I_r = parse_number(path, value) * 1e-8;
            else if (key == "m_t_kg") cfg.track.m_T = parse_number(path, value);
            else if (key == "k_s_mn_m") cfg.track.k_s = parse_number(path, value) * 1e6;
            else if (key == "c_s_kns_m") cfg.track.c_s = parse_number(path, value) * 1e3;
            else if (key == "k_b_mn_m") cfg.track.k_b = parse_number(path, value) * 1e6;
            else if (key == "c_b_kns_m") cfg.track.c_b = parse_number(path, value) * 1e3;
            else if (key == "zeta") {
                cfg.track.zeta1 = cfg.track.zeta2 = parse_number(path, value);
            } else if (key == "zeta1") cfg.track.zeta1 = parse_number(path, value);
            else if (key == "zeta2") cfg.track.zeta2 = parse_number(path, value);
            else if (key == "l_m") cfg.track.L = parse_number(path, value);
            else if (key == "sections")
                cfg.sections = static_cast<int>(parse_number(path, value));
            else throw ConfigError("unknown config key " + path);
        } else if (section == "pulse") {
            if (key == "kind") cfg.pulse_kind = parse_kind(path, value);
            else if (key == "p0_tonnes") {
                cfg.p0_tonnes = parse_number(path, value);
                cfg.p0_entered_newtons = false;
                p0_tonnes_seen = true;
            } else if (key == "p0_n") {
                cfg.p0_tonnes = parse_number(path, value);
                cfg.p0_entered_newtons = true;
                p0_newtons_seen = true;
            } else if (key == "g_m_s2") cfg.g = parse_number(path, value);
            else if (key == "t_d_s") cfg.t_d = parse_number(path, value);
            else if (key == "omega_rad_s") cfg.omega_override = parse_number(path, value);
            else throw ConfigError("unknown config key " + path);
        } else if (section == "solver") {
            if (key == "method") cfg.method = parse_method(path, value);
            else if (key == "dt_s") cfg.dt = parse_number(path, value);
            else if (key == "duration_s") cfg.duration = parse_number(path, value);
            else if (key == "undamped") cfg.undamped = parse_bool(path, value);
            else throw ConfigError("unknown config key " + path);
        } else {
            if (key == "dir") cfg.out_dir = value;
            else if (key == "threshold_percent")
                cfg.threshold_percent = parse_number(path, value);
            else throw ConfigError("unknown config key " + path);
        }
    }

    if (p0_tonnes_seen && p0_newtons_seen)
        throw ConfigError("pulse.p0_tonnes and pulse.p0_n are mutually exclusive");
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace raildyn
