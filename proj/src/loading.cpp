#include "raildyn/loading.hpp"

#include <cmath>
#include <sstream>

namespace raildyn {

PulseLoad PulseLoad::rectangular(double p0, double t_d) {
    PulseLoad p;
    p.kind = PulseKind::rectangular;
    p.P0 = p0;
    p.t_d = t_d;
    p.omega = 0.0;
    p.validate();
    return p;
}

PulseLoad PulseLoad::half_sine(double p0, double t_d) {
    return half_sine(p0, t_d, M_PI / t_d);
}

PulseLoad PulseLoad::half_sine(double p0, double t_d, double omega) {
    PulseLoad p;
    p.kind = PulseKind::half_sine;
    p.P0 = p0;
    p.t_d = t_d;
    p.omega = omega;
    p.validate();
    return p;
}

void PulseLoad::validate() const {
    if (!(P0 >= 0.0))
        throw ConfigError("pulse.P0 must be non-negative");
    if (!(t_d > 0.0))
        throw ConfigError("pulse.t_d must be strictly positive");
    if (kind == PulseKind::half_sine && !(omega > 0.0))
        throw ConfigError("pulse.omega must be strictly positive for the half-sine pulse");
}

double pulse_value(const PulseLoad& pulse, double t) {
    if (t < 0.0 || t > pulse.t_d) return 0.0;
    if (pulse.kind == PulseKind::rectangular) return pulse.P0;
    return pulse.P0 * std::sin(pulse.omega * t);
}

double pulse_right_limit(const PulseLoad& pulse, double t) {
    if (pulse.kind == PulseKind::rectangular)
        return (t >= 0.0 && t < pulse.t_d) ? pulse.P0 : 0.0;
    return pulse_value(pulse, t);
}

std::vector<double> pulse_discontinuities(const PulseLoad& pulse) {
    if (pulse.kind == PulseKind::rectangular) return {0.0, pulse.t_d};
    return {};
}

int load_dof_index(int n_sections) {
    if (n_sections < 1)
        throw ConfigError("load_dof_index: n_sections must be at least 1");
    if (n_sections == 1)
        throw ModelError(
            "a single-section track centers the load on DOF 4, which is a rotation; "
            "the nearest vertical rail DOF is index 3 (mid-node translation) - "
            "use two or more sections, or place the load explicitly");
    if (n_sections == 2) return 5;
    if (n_sections % 2 == 0) return 5 * n_sections / 2 + 1;
    return 5 * (n_sections + 1) / 2 - 1;
}

LoadVector load_vector(const AssembledSystem& system, const PulseLoad& pulse) {
    pulse.validate();
    const int j1 = load_dof_index(system.n_sections);
    const int j = j1 - 1;
    if (j < 0 || j >= system.n_dof) {
        std::ostringstream os;
        os << "load index " << j1 << " is outside the " << system.n_dof
           << "-DOF global vector";
        throw ModelError(os.str());
    }
    if (!system.is_rail_translation_dof(j)) {
        std::ostringstream os;
        os << "load index " << j1
           << " does not land on a rail vertical-translation DOF; "
              "model and assembly disagree";
        throw ModelError(os.str());
    }
    LoadVector lv;
    lv.dof = j;
    lv.pattern = Vec::Zero(system.n_dof);
    lv.pattern[j] = 1.0;
    lv.pulse = pulse;
    return lv;
}

} // namespace raildyn
