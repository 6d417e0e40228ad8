#pragma once

#include "raildyn/types.hpp"

#include <array>
#include <utility>
#include <vector>

namespace raildyn {

/// Physical description of the track. All values strict SI (m, kg, N, s).
struct TrackProperties {
    double rho_r = 7850.0;    ///< rail density (kg/m^3)
    double A_r = 76.70e-4;    ///< rail cross-section area (m^2)
    double E_r = 210e9;       ///< rail Young modulus (Pa)
    double I_r = 3038.6e-8;   ///< rail second moment of area (m^4)
    double m_T = 90.84;       ///< sleeper mass (kg)
    double k_s = 90e6;        ///< railpad stiffness (N/m)
    double c_s = 30e3;        ///< railpad damping (N*s/m)
    double k_b = 25.5e6;      ///< ballast stiffness (N/m)
    double c_b = 40e3;        ///< ballast damping (N*s/m)
    double zeta1 = 0.05;      ///< rail damping ratio at the first anchor mode
    double zeta2 = 0.05;      ///< rail damping ratio at the second anchor mode
    double L = 0.6;           ///< rail element length = sleeper spacing (m)

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    /// Bundled reference parameter set (standard ballasted-track values).
    static TrackProperties reference() { return TrackProperties{}; }

    /// Same properties with every damping source removed.
    TrackProperties undamped() const;
};

/// Two-element rail beam matrices on DOFs [u1, th1, u2, th2, u3, th3].
/// Consistent-mass Euler-Bernoulli; free-free (grounding comes from the
/// ballast springs, never from boundary constraints).
Mat rail_mass_matrix(const TrackProperties& props);
Mat rail_stiffness_matrix(const TrackProperties& props);

/// Sub-matrices on [th1, u2, th2, th3] obtained by deleting the rows/columns
/// of u1 and u3 (those two DOFs are carried by the railpads, so the rail's
/// own damping anchor modes exclude them).
std::pair<Mat, Mat> reduced_rail_matrices(const Mat& M6, const Mat& K6);

struct RayleighCoefficients {
    double a0; ///< mass-proportional coefficient (1/s)
    double a1; ///< stiffness-proportional coefficient (s)
};

/// Solves zeta_i = a0/(2 w_i) + a1 w_i/2 for i = 1,2. Requires 0 < w1 < w2.
RayleighCoefficients rayleigh_coefficients(double omega1, double omega2,
                                           double zeta1, double zeta2);

/// a0*Mstar + a1*Kstar on [th1, u2, th2, th3], embedded back into the 6-DOF
/// rail basis with zero rows/columns at u1 and u3.
Mat rail_damping_matrix(const Mat& Mstar, const Mat& Kstar, double a0, double a1);

/// 8x8 matrices of one elementary section on
/// [u1, th1, u2, th2, u3, th3, uT1, uT2]: rail blocks top-left, sleeper
/// masses on the last two diagonal entries, railpads coupling (u1,uT1) and
/// (u3,uT2), ballast spring/damper grounding each sleeper.
struct SectionMatrices {
    Mat M, C, K;
};
SectionMatrices section_matrices(const TrackProperties& props);

/// Chain of N sections. Adjacent sections share (u1, th1, uT1) with the
/// previous section's (u3, th3, uT2); overlapping contributions are summed,
/// so interior sleepers deliberately carry doubled mass, pad, and ballast
/// coefficients. n_dof = 5N + 3.
struct AssembledSystem {
    int n_sections = 0;
    int n_dof = 0;
    Mat M, C, K;
    /// dof_map[j][k]: global index (0-based) of section j's local DOF k in
    /// the section ordering [u1, th1, u2, th2, u3, th3, uT1, uT2].
    std::vector<std::array<int, 8>> dof_map;
    TrackProperties props;

    /// Global indices of the N+1 sleeper DOFs, left to right.
    std::vector<int> sleeper_dofs() const;

    /// Assembled ballast coefficient multiplier per sleeper: end sleepers
    /// carry one section's contribution, interior sleepers two.
    std::vector<double> sleeper_ballast_multiplicity() const;

    /// Global indices of rail vertical-translation DOFs, left to right.
    std::vector<int> rail_translation_dofs() const;

    bool is_rail_translation_dof(int global_index) const;
};
AssembledSystem assemble_track(const TrackProperties& props, int n_sections);

struct CalibrationPoint {
    double L;    ///< element length (m)
    double f12;  ///< mean of the two lowest single-section frequencies (Hz)
};

struct CalibrationResult {
    bool found = false;
    double L = 0.0;
    double f12 = 0.0;
    std::vector<double> modes_hz;         ///< single-section spectrum at L
    std::vector<CalibrationPoint> sweep;  ///< coarse f12(L) tabulation
    std::string message;
};

/// Bisection over L in [0.05, 1.2] m for the element length whose two lowest
/// single-section frequencies average to target_f12_hz. The input L is
/// ignored. On failure the sweep and bracket endpoints document why.
CalibrationResult calibrate_element_length(const TrackProperties& base,
                                           double target_f12_hz, double tol_hz);

} // namespace raildyn
