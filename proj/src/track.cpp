#include "raildyn/track.hpp"

#include "raildyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace raildyn {
namespace {

void require_positive(double v, const char* field) {
    if (!(v > 0.0)) {
        std::ostringstream os;
        os << "track." << field << " must be strictly positive (got " << v << ")";
        throw ConfigError(os.str());
    }
}

void require_non_negative(double v, const char* field) {
    if (!(v >= 0.0)) {
        std::ostringstream os;
        os << "track." << field << " must be non-negative (got " << v << ")";
        throw ConfigError(os.str());
    }
}

void require_ratio(double v, const char* field) {
    if (!(v >= 0.0 && v < 1.0)) {
        std::ostringstream os;
        os << "track." << field << " must lie in [0, 1) (got " << v << ")";
        throw ConfigError(os.str());
    }
}

/// Single consistent-mass Euler-Bernoulli beam element, DOFs [u_a, th_a, u_b, th_b].
Mat beam_element_mass(double rho, double A, double L) {
    const double c = rho * A * L / 420.0;
    Mat m(4, 4);
    m << 156.0, 22.0 * L, 54.0, -13.0 * L,
        22.0 * L, 4.0 * L * L, 13.0 * L, -3.0 * L * L,
        54.0, 13.0 * L, 156.0, -22.0 * L,
        -13.0 * L, -3.0 * L * L, -22.0 * L, 4.0 * L * L;
    return c * m;
}

Mat beam_element_stiffness(double E, double I, double L) {
    const double s = E * I / (L * L * L);
    Mat k(4, 4);
    k << 12.0, 6.0 * L, -12.0, 6.0 * L,
        6.0 * L, 4.0 * L * L, -6.0 * L, 2.0 * L * L,
        -12.0, -6.0 * L, 12.0, -6.0 * L,
        6.0 * L, 2.0 * L * L, -6.0 * L, 4.0 * L * L;
    return s * k;
}

/// Two elements sharing the middle node; symmetric by construction.
Mat two_element_assembly(const Mat& e) {
    Mat g = Mat::Zero(6, 6);
    g.topLeftCorner(4, 4) += e;
    g.bottomRightCorner(4, 4) += e;
    return g;
}

constexpr int kReducedDofs[4] = {1, 2, 3, 5}; // [th1, u2, th2, th3]

} // namespace

void TrackProperties::validate() const {
    require_positive(rho_r, "rho_r");
    require_positive(A_r, "A_r");
    require_positive(E_r, "E_r");
    require_positive(I_r, "I_r");
    require_positive(m_T, "m_T");
    require_positive(k_s, "k_s");
    require_positive(k_b, "k_b");
    require_positive(L, "L");
    require_non_negative(c_s, "c_s");
    require_non_negative(c_b, "c_b");
    require_ratio(zeta1, "zeta1");
    require_ratio(zeta2, "zeta2");
}

TrackProperties TrackProperties::undamped() const {
    TrackProperties p = *this;
    p.c_s = 0.0;
    p.c_b = 0.0;
    p.zeta1 = 0.0;
    p.zeta2 = 0.0;
    return p;
}

Mat rail_mass_matrix(const TrackProperties& props) {
    props.validate();
    return two_element_assembly(beam_element_mass(props.rho_r, props.A_r, props.L));
}

Mat rail_stiffness_matrix(const TrackProperties& props) {
    props.validate();
    return two_element_assembly(beam_element_stiffness(props.E_r, props.I_r, props.L));
}

std::pair<Mat, Mat> reduced_rail_matrices(const Mat& M6, const Mat& K6) {
    Mat Ms(4, 4), Ks(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            Ms(r, c) = M6(kReducedDofs[r], kReducedDofs[c]);
            Ks(r, c) = K6(kReducedDofs[r], kReducedDofs[c]);
        }
    return {Ms, Ks};
}

RayleighCoefficients rayleigh_coefficients(double omega1, double omega2,
                                           double zeta1, double zeta2) {
    if (!(omega1 > 0.0) || !(omega2 > omega1)) {
        std::ostringstream os;
        os << "rayleigh_coefficients requires 0 < omega1 < omega2 (got " << omega1
           << ", " << omega2 << ")";
        throw ConfigError(os.str());
    }
    const double det = omega2 * omega2 - omega1 * omega1;
    RayleighCoefficients r;
    r.a0 = 2.0 * omega1 * omega2 * (zeta1 * omega2 - zeta2 * omega1) / det;
    r.a1 = 2.0 * (zeta2 * omega2 - zeta1 * omega1) / det;
    return r;
}

Mat rail_damping_matrix(const Mat& Mstar, const Mat& Kstar, double a0, double a1) {
    const Mat C4 = a0 * Mstar + a1 * Kstar;
    Mat C6 = Mat::Zero(6, 6);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) C6(kReducedDofs[r], kReducedDofs[c]) = C4(r, c);
    return C6;
}

SectionMatrices section_matrices(const TrackProperties& props) {
    props.validate();
    const Mat M6 = rail_mass_matrix(props);
    const Mat K6 = rail_stiffness_matrix(props);
    const auto [Mstar, Kstar] = reduced_rail_matrices(M6, K6);

    // Damping anchors: the two lowest modes of the reduced rail pencil.
    const ModalBasis rail_modes = modal_decompose(Mstar, Kstar);
    const double w1 = std::sqrt(rail_modes.omega_sq[0]);
    const double w2 = std::sqrt(rail_modes.omega_sq[1]);
    const auto [a0, a1] = rayleigh_coefficients(w1, w2, props.zeta1, props.zeta2);

    SectionMatrices s;
    s.M = Mat::Zero(8, 8);
    s.C = Mat::Zero(8, 8);
    s.K = Mat::Zero(8, 8);

    s.M.topLeftCorner(6, 6) = M6;
    s.K.topLeftCorner(6, 6) = K6;
    s.C.topLeftCorner(6, 6) = rail_damping_matrix(Mstar, Kstar, a0, a1);

    s.M(6, 6) = props.m_T;
    s.M(7, 7) = props.m_T;

    // Railpads couple (u1, uT1) and (u3, uT2); ballast grounds each sleeper.
    const int pairs[2][2] = {{0, 6}, {4, 7}};
    for (const auto& p : pairs) {
        const int u = p[0], t = p[1];
        s.K(u, u) += props.k_s;
        s.K(t, t) += props.k_s;
        s.K(u, t) -= props.k_s;
        s.K(t, u) -= props.k_s;
        s.C(u, u) += props.c_s;
        s.C(t, t) += props.c_s;
        s.C(u, t) -= props.c_s;
        s.C(t, u) -= props.c_s;
    }
    s.K(6, 6) += props.k_b;
    s.K(7, 7) += props.k_b;
    s.C(6, 6) += props.c_b;
    s.C(7, 7) += props.c_b;
    return s;
}

AssembledSystem assemble_track(const TrackProperties& props, int n_sections) {
    if (n_sections < 1)
        throw ConfigError("n_sections must be at least 1");
    const SectionMatrices sec = section_matrices(props);

    AssembledSystem sys;
    sys.n_sections = n_sections;
    sys.n_dof = 5 * n_sections + 3;
    sys.M = Mat::Zero(sys.n_dof, sys.n_dof);
    sys.C = Mat::Zero(sys.n_dof, sys.n_dof);
    sys.K = Mat::Zero(sys.n_dof, sys.n_dof);
    sys.props = props;
    sys.dof_map.reserve(n_sections);

    for (int j = 0; j < n_sections; ++j) {
        std::array<int, 8> g{};
        if (j == 0) {
            for (int k = 0; k < 8; ++k) g[k] = k;
        } else {
            // Shared boundary: this section's (u1, th1, uT1) are the previous
            // section's (u3, th3, uT2); the other five DOFs are fresh.
            const std::array<int, 8>& prev = sys.dof_map[j - 1];
            const int base = 8 + 5 * (j - 1);
            g = {prev[4], prev[5], base, base + 1, base + 2, base + 3, prev[7], base + 4};
        }
        sys.dof_map.push_back(g);
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b) {
                sys.M(g[a], g[b]) += sec.M(a, b);
                sys.C(g[a], g[b]) += sec.C(a, b);
                sys.K(g[a], g[b]) += sec.K(a, b);
            }
    }
    return sys;
}

std::vector<int> AssembledSystem::sleeper_dofs() const {
    std::vector<int> dofs;
    dofs.reserve(n_sections + 1);
    dofs.push_back(dof_map.front()[6]);
    for (const auto& g : dof_map) dofs.push_back(g[7]);
    return dofs;
}

std::vector<double> AssembledSystem::sleeper_ballast_multiplicity() const {
    std::vector<double> mult(n_sections + 1, 2.0);
    mult.front() = 1.0;
    mult.back() = 1.0;
    return mult;
}

std::vector<int> AssembledSystem::rail_translation_dofs() const {
    std::vector<int> dofs;
    dofs.push_back(dof_map.front()[0]);
    for (const auto& g : dof_map) {
        dofs.push_back(g[2]);
        dofs.push_back(g[4]);
    }
    return dofs;
}

bool AssembledSystem::is_rail_translation_dof(int global_index) const {
    for (const auto& g : dof_map)
        if (g[0] == global_index || g[2] == global_index || g[4] == global_index)
            return true;
    return false;
}

namespace {

double paired_low_frequency(const TrackProperties& base, double L) {
    TrackProperties p = base;
    p.L = L;
    const SectionMatrices sec = section_matrices(p);
    const ModalBasis modes = modal_decompose(sec.M, sec.K);
    const double f1 = std::sqrt(modes.omega_sq[0]) / (2.0 * M_PI);
    const double f2 = std::sqrt(modes.omega_sq[1]) / (2.0 * M_PI);
    return 0.5 * (f1 + f2);
}

} // namespace

CalibrationResult calibrate_element_length(const TrackProperties& base,
                                           double target_f12_hz, double tol_hz) {
    if (!(target_f12_hz > 0.0))
        throw ConfigError("calibrate: target frequency must be positive");
    if (!(tol_hz > 0.0))
        throw ConfigError("calibrate: tolerance must be positive");

    constexpr double kLo = 0.05;
    constexpr double kHi = 1.2;

    CalibrationResult result;
    for (double L = kLo; L < kHi + 1e-9; L += 0.05)
        result.sweep.push_back({L, paired_low_frequency(base, L)});

    const double g_lo = result.sweep.front().f12 - target_f12_hz;
    const double g_hi = result.sweep.back().f12 - target_f12_hz;
    if (g_lo * g_hi > 0.0) {
        std::ostringstream os;
        os << "no root in [" << kLo << ", " << kHi << "] m: f12(" << kLo
           << ") = " << result.sweep.front().f12 << " Hz, f12(" << kHi
           << ") = " << result.sweep.back().f12 << " Hz, target " << target_f12_hz
           << " Hz lies outside";
        result.message = os.str();
        return result;
    }

    double lo = kLo, hi = kHi;
    double f_lo = g_lo;
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = paired_low_frequency(base, mid) - target_f12_hz;
        if ((g_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = g_mid;
        } else {
            hi = mid;
        }
    }

    result.L = 0.5 * (lo + hi);
    result.f12 = paired_low_frequency(base, result.L);
    result.found = std::abs(result.f12 - target_f12_hz) <= tol_hz;

    TrackProperties at = base;
    at.L = result.L;
    const SectionMatrices sec = section_matrices(at);
    const ModalBasis modes = modal_decompose(sec.M, sec.K);
    for (int i = 0; i < modes.n(); ++i)
        result.modes_hz.push_back(std::sqrt(modes.omega_sq[i]) / (2.0 * M_PI));

    std::ostringstream os;
    if (result.found) {
        os << "L = " << result.L << " m gives paired low-mode frequency " << result.f12
           << " Hz (target " << target_f12_hz << " Hz)";
    } else {
        os << "bisection converged to L = " << result.L << " m with f12 = " << result.f12
           << " Hz, outside tolerance " << tol_hz << " Hz of target " << target_f12_hz;
    }
    result.message = os.str();
    return result;
}

} // namespace raildyn
