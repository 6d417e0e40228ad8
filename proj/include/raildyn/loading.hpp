#pragma once

#include "raildyn/track.hpp"
#include "raildyn/types.hpp"

#include <vector>

namespace raildyn {

enum class PulseKind { rectangular, half_sine };

/// Wheel-load pulse P(t) applied at a single rail node.
/// rectangular: P0 on [0, t_d]; half_sine: P0 sin(omega t) on [0, t_d] with
/// omega = pi/t_d unless overridden for sensitivity studies.
struct PulseLoad {
    PulseKind kind = PulseKind::half_sine;
    double P0 = 0.0;    ///< amplitude (N)
    double t_d = 0.0;   ///< duration (s)
    double omega = 0.0; ///< circular frequency (rad/s); half_sine only

    static PulseLoad rectangular(double p0, double t_d);
    static PulseLoad half_sine(double p0, double t_d);
    static PulseLoad half_sine(double p0, double t_d, double omega);

    void validate() const;
};

/// P(t); zero outside [0, t_d].
double pulse_value(const PulseLoad& pulse, double t);

/// Right limit P(t+): differs from pulse_value only where the pulse jumps.
/// Time integrators must restart accelerations from this value at jumps.
double pulse_right_limit(const PulseLoad& pulse, double t);

/// Times where P jumps (rectangular: onset and drop; half_sine: none).
std::vector<double> pulse_discontinuities(const PulseLoad& pulse);

/// 1-based index of the loaded DOF in the global vector: N = 2 -> 5,
/// even N -> 5N/2 + 1, odd N -> 5(N+1)/2 - 1. Throws ModelError for N = 1,
/// where the formula lands on a rotation DOF (index 4); the message names the
/// nearest vertical DOF instead of silently relocating the load.
int load_dof_index(int n_sections);

/// Spatial pattern (single unit entry) plus the pulse signal.
struct LoadVector {
    int dof = 0; ///< 0-based global index of the loaded DOF
    Vec pattern; ///< unit point-load pattern
    PulseLoad pulse;
};

/// Places the pulse at load_dof_index(N), verifying against the system's
/// dof_map that the target is a rail vertical-translation DOF.
LoadVector load_vector(const AssembledSystem& system, const PulseLoad& pulse);

} // namespace raildyn
