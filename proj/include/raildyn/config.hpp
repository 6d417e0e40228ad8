#pragma once

#include "raildyn/loading.hpp"
#include "raildyn/response.hpp"
#include "raildyn/track.hpp"

#include <string>

namespace raildyn {

/// A full scenario: track, load, solver and output choices. Track fields are
/// entered in the engineering units of the reference data set (cm^2, GPa,
/// cm^4, MN/m, kN.s/m) and converted to SI on load; the manifest echoes them
/// back in entry units.
struct ScenarioConfig {
    TrackProperties track;
    int sections = 4;

    PulseKind pulse_kind = PulseKind::half_sine;
    double p0_tonnes = 10.0;
    bool p0_entered_newtons = false;
    double g = 9.81;
    double t_d = 0.01;
    double omega_override = 0.0;

    SolveMethod method = SolveMethod::state_space;
    double dt = 0.0;
    double duration = 0.0;
    bool undamped = false;

    std::string out_dir;
    double threshold_percent = 1.5;

    double p0_newtons() const;
    double resolved_dt() const { return dt > 0.0 ? dt : t_d / 100.0; }
    double resolved_duration() const { return duration > 0.0 ? duration : 10.0 * t_d; }
    PulseLoad pulse() const;
    TrackProperties resolved_track() const;

    void validate() const;
};

/// Parse `key = value` lines grouped under [track], [pulse], [solver] and
/// [output] section headers. Unknown sections or keys fail with the full
/// field path; '#' and ';' start comments.
ScenarioConfig parse_config_text(const std::string& text);

ScenarioConfig load_config(const std::string& path);

} // namespace raildyn
