#include "raildyn/response.hpp"

#include "raildyn/kernels.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <set>
#include <sstream>

namespace raildyn {
namespace {

constexpr Complex kI{0.0, 1.0};

/// exp(a*t) with hard zero once the magnitude underflows the normal range.
Complex decay_exp(Complex a, double t) {
    const double re = a.real() * t;
    if (re < -745.0) return {0.0, 0.0};
    return std::exp(a * t);
}

/// (exp(s t) - exp(a t)) / (s - a), the bounded building block of the forced
/// half-sine solution; series form inside the removable-singularity band.
Complex pulse_term(Complex s, Complex a, double t) {
    const Complex c = s - a;
    if (std::abs(c) * t < 1e-8) {
        const Complex ct = c * t;
        return decay_exp(s, t) * t * (1.0 - 0.5 * ct + ct * ct / 6.0);
    }
    return (decay_exp(s, t) - decay_exp(a, t)) / c;
}

/// (exp(a t) - 1) / a with the same guard; equals t at a = 0.
Complex ramp_term(Complex a, double t) {
    const Complex at = a * t;
    if (std::abs(at) < 1e-8)
        return t * (1.0 + 0.5 * at + at * at / 6.0);
    return (decay_exp(a, t) - 1.0) / a;
}

} // namespace

TimeGrid make_grid(double dt, double duration, double t_d) {
    if (!(dt > 0.0)) throw ConfigError("grid.dt must be strictly positive");
    if (!(duration > 0.0)) throw ConfigError("grid.duration must be strictly positive");
    if (!(t_d > 0.0)) throw ConfigError("grid.t_d must be strictly positive");

    TimeGrid g;
    g.dt = dt;
    g.n_steps = static_cast<int>(std::llround(duration / dt));
    if (g.n_steps < 1) g.n_steps = 1;
    g.td_steps = static_cast<int>(std::llround(t_d / dt));
    if (g.td_steps < 1) {
        std::ostringstream os;
        os << "grid.dt = " << dt << " s cannot represent the pulse duration " << t_d
           << " s (snapped to zero steps)";
        throw ConfigError(os.str());
    }
    return g;
}

ResponseHistory undamped_modal_response(const ModalBasis& basis, int load_dof,
                                        const PulseLoad& pulse, const TimeGrid& grid) {
    pulse.validate();
    const int n = basis.n();
    if (load_dof < 0 || load_dof >= n)
        throw ModelError("undamped_modal_response: load DOF out of range");

    const auto& ker = kernels::active();
    const RowMat PhiR = basis.Phi;

    const double om = pulse.omega;
    const bool sine = pulse.kind == PulseKind::half_sine;
    const double td = grid.t_d();

    Vec b(n), wi(n);
    for (int i = 0; i < n; ++i) {
        b[i] = basis.Phi(load_dof, i) * pulse.P0;
        wi[i] = std::sqrt(basis.omega_sq[i]);
    }

    // Forced-phase modal displacement and velocity at time t.
    const auto forced = [&](int i, double t, double& z, double& zd) {
        const double w = wi[i];
        if (w < 1e-6) {
            // Rigid mode: integrate the modal acceleration twice.
            if (sine) {
                z = b[i] * (t - std::sin(om * t) / om) / om;
                zd = b[i] * (1.0 - std::cos(om * t)) / om;
            } else {
                z = 0.5 * b[i] * t * t;
                zd = b[i] * t;
            }
            return;
        }
        const double w2 = basis.omega_sq[i];
        if (!sine) {
            z = b[i] / w2 * (1.0 - std::cos(w * t));
            zd = b[i] / w * std::sin(w * t);
            return;
        }
        const double beta = om / w;
        const double denom = 1.0 - beta * beta;
        if (std::abs(denom) < 1e-8) {
            z = b[i] / (2.0 * w2) * (std::sin(w * t) - w * t * std::cos(w * t));
            zd = 0.5 * b[i] * t * std::sin(w * t);
            return;
        }
        const double amp = b[i] / w2 / denom;
        z = amp * (std::sin(om * t) - beta * std::sin(w * t));
        zd = amp * om * (std::cos(om * t) - std::cos(w * t));
    };

    Vec z_td(n), zd_td(n);
    for (int i = 0; i < n; ++i) forced(i, td, z_td[i], zd_td[i]);

    ResponseHistory hist;
    hist.grid = grid;
    hist.U.resize(n, grid.samples());
    hist.V.resize(n, grid.samples());
    hist.meta = {SolveMethod::modal_undamped, pulse, load_dof};

    Vec z(n), zd(n), tmp(n);
    for (int k = 0; k < grid.samples(); ++k) {
        const double t = grid.t(k);
        if (k <= grid.td_steps) {
            for (int i = 0; i < n; ++i) forced(i, t, z[i], zd[i]);
        } else {
            const double tau = t - td;
            for (int i = 0; i < n; ++i) {
                const double w = wi[i];
                if (w < 1e-6) {
                    z[i] = z_td[i] + zd_td[i] * tau;
                    zd[i] = zd_td[i];
                } else {
                    const double cwt = std::cos(w * tau);
                    const double swt = std::sin(w * tau);
                    z[i] = z_td[i] * cwt + zd_td[i] / w * swt;
                    zd[i] = -z_td[i] * w * swt + zd_td[i] * cwt;
                }
            }
        }
        ker.gemv_row(PhiR.data(), z.data(), tmp.data(), n, n);
        for (int r = 0; r < n; ++r) hist.U(r, k) = tmp[r];
        ker.gemv_row(PhiR.data(), zd.data(), tmp.data(), n, n);
        for (int r = 0; r < n; ++r) hist.V(r, k) = tmp[r];
    }
    return hist;
}

ResponseHistory damped_state_response(const StateBasis& basis, int load_dof,
                                      const PulseLoad& pulse, const TimeGrid& grid) {
    pulse.validate();
    const int n = basis.n();
    const int m = 2 * n;
    if (load_dof < 0 || load_dof >= n)
        throw ModelError("damped_state_response: load DOF out of range");

    const auto& ker = kernels::active();

    CVec b(m);
    for (int i = 0; i < m; ++i) b[i] = basis.force_map(i, load_dof) * pulse.P0;

    // Physical reconstruction operators: displacement rows read the z block
    // of y = Psi x, velocities the zdot block, both premultiplied by Phi.
    const CMat Pt = basis.Phi * basis.Psi.topRows(n);
    const CMat Pb = basis.Phi * basis.Psi.bottomRows(n);
    const RowMat Pt_re = Pt.real(), Pt_im = Pt.imag();
    const RowMat Pb_re = Pb.real(), Pb_im = Pb.imag();

    const double om = pulse.omega;
    const bool sine = pulse.kind == PulseKind::half_sine;
    const double td = grid.t_d();

    const auto forced = [&](int i, double t) -> Complex {
        const Complex a = basis.lambda[i];
        if (sine)
            return b[i] / (2.0 * kI) *
                   (pulse_term(kI * om, a, t) - pulse_term(-kI * om, a, t));
        return b[i] * ramp_term(a, t);
    };

    CVec x_td(m);
    for (int i = 0; i < m; ++i) x_td[i] = forced(i, td);

    ResponseHistory hist;
    hist.grid = grid;
    hist.U.resize(n, grid.samples());
    hist.V.resize(n, grid.samples());
    hist.meta = {SolveMethod::state_space, pulse, load_dof};

    Vec xre(m), xim(m), t1(n), t2(n), t3(n), t4(n);
    double max_mag = 0.0, max_imag = 0.0;

    for (int k = 0; k < grid.samples(); ++k) {
        const double t = grid.t(k);
        if (k <= grid.td_steps) {
            for (int i = 0; i < m; ++i) {
                const Complex x = forced(i, t);
                xre[i] = x.real();
                xim[i] = x.imag();
            }
        } else {
            const double tau = t - td;
            for (int i = 0; i < m; ++i) {
                const Complex x = x_td[i] * decay_exp(basis.lambda[i], tau);
                xre[i] = x.real();
                xim[i] = x.imag();
            }
        }
        // Re(P x) lands in the history; Im(P x) is the consistency residue.
        ker.gemv_row(Pt_re.data(), xre.data(), t1.data(), n, m);
        ker.gemv_row(Pt_im.data(), xim.data(), t2.data(), n, m);
        ker.gemv_row(Pt_re.data(), xim.data(), t3.data(), n, m);
        ker.gemv_row(Pt_im.data(), xre.data(), t4.data(), n, m);
        for (int r = 0; r < n; ++r) {
            const double re = t1[r] - t2[r];
            hist.U(r, k) = re;
            max_mag = std::max(max_mag, std::abs(re));
            max_imag = std::max(max_imag, std::abs(t3[r] + t4[r]));
        }
        ker.gemv_row(Pb_re.data(), xre.data(), t1.data(), n, m);
        ker.gemv_row(Pb_im.data(), xim.data(), t2.data(), n, m);
        for (int r = 0; r < n; ++r) hist.V(r, k) = t1[r] - t2[r];
    }

    if (max_imag > 1e-8 * std::max(max_mag, 1e-300)) {
        std::ostringstream os;
        os << "damped_state_response: imaginary residue " << max_imag
           << " exceeds 1e-8 of the response magnitude " << max_mag
           << "; the state eigenbasis is inconsistent";
        throw NumericalError(os.str());
    }
    return hist;
}

ResponseHistory newmark_integrate(const Mat& M, const Mat& C, const Mat& K,
                                  int load_dof, const PulseLoad& pulse,
                                  const TimeGrid& grid, const NewmarkOptions& options) {
    pulse.validate();
    const int n = static_cast<int>(M.rows());
    if (load_dof < 0 || load_dof >= n)
        throw ModelError("newmark_integrate: load DOF out of range");
    if (!(options.beta > 0.0) || !(options.gamma > 0.0))
        throw ConfigError("newmark: beta and gamma must be positive");

    if (options.enforce_resolution) {
        const ModalBasis modes = modal_decompose(M, K);
        const double w_max = std::sqrt(modes.omega_sq[modes.n() - 1]);
        const double t_min = 2.0 * M_PI / w_max;
        if (grid.dt > t_min / 20.0) {
            std::ostringstream os;
            os << "newmark: dt = " << grid.dt << " s does not resolve the highest mode"
               << " (T_min/20 = " << t_min / 20.0
               << " s); refine the grid or disable the resolution guard";
            throw ConfigError(os.str());
        }
    }

    const double beta = options.beta, gamma = options.gamma, dt = grid.dt;
    const double c0 = 1.0 / (beta * dt * dt);
    const double c1 = 1.0 / (beta * dt);
    const double c2 = 1.0 / (2.0 * beta) - 1.0;
    const double d0 = gamma / (beta * dt);
    const double d1 = gamma / beta - 1.0;
    const double d2 = dt * (0.5 * gamma / beta - 1.0);

    Eigen::LLT<Mat> mass_llt(M);
    if (mass_llt.info() != Eigen::Success)
        throw NumericalError("newmark: mass matrix is not positive definite");
    const Mat Keff = K + d0 * C + c0 * M;
    Eigen::LLT<Mat> keff_llt(Keff);
    if (keff_llt.info() != Eigen::Success)
        throw NumericalError("newmark: effective stiffness factorization failed");

    const RowMat Mr = M, Cr = C;
    const auto& ker = kernels::active();

    // Grid-aligned force jumps require restarting the acceleration from the
    // right-limit balance, otherwise the averaged step smears half a step of
    // impulse across the discontinuity and the method degrades to first order.
    std::set<int> jump_steps;
    for (double tau : pulse_discontinuities(pulse)) {
        const int k = static_cast<int>(std::llround(tau / dt));
        if (k >= 0 && k < grid.n_steps &&
            std::abs(k * dt - tau) <= 1e-9 * std::max(dt, tau))
            jump_steps.insert(k);
    }

    ResponseHistory hist;
    hist.grid = grid;
    hist.U.setZero(n, grid.samples());
    hist.V.setZero(n, grid.samples());
    hist.meta = {SolveMethod::newmark, pulse, load_dof};

    Vec u = Vec::Zero(n), v = Vec::Zero(n);
    Vec f0 = Vec::Zero(n);
    f0[load_dof] = pulse_right_limit(pulse, 0.0);
    Vec a = mass_llt.solve(f0);

    Vec tmp(n), rhs(n), cpart(n), anew(n), vnew(n);
    for (int k = 1; k <= grid.n_steps; ++k) {
        const int prev = k - 1;
        if (prev > 0 && jump_steps.count(prev)) {
            Vec fr = Vec::Zero(n);
            fr[load_dof] = pulse_right_limit(pulse, grid.t(prev));
            a = mass_llt.solve(fr - C * v - K * u);
        }
        const double t = grid.t(k);

        ker.scale_add3(c0, u.data(), c1, v.data(), c2, a.data(), tmp.data(), n);
        ker.gemv_row(Mr.data(), tmp.data(), rhs.data(), n, n);
        ker.scale_add3(d0, u.data(), d1, v.data(), d2, a.data(), tmp.data(), n);
        ker.gemv_row(Cr.data(), tmp.data(), cpart.data(), n, n);
        ker.axpy(1.0, cpart.data(), rhs.data(), n);
        rhs[load_dof] += pulse_value(pulse, t);

        const Vec unew = keff_llt.solve(rhs);

        ker.scale_add3(c0, unew.data(), -c0, u.data(), -c1, v.data(), anew.data(), n);
        ker.axpy(-c2, a.data(), anew.data(), n);
        ker.scale_add3(1.0, v.data(), dt * (1.0 - gamma), a.data(), dt * gamma,
                       anew.data(), vnew.data(), n);

        u = unew;
        v = vnew;
        a = anew;
        for (int r = 0; r < n; ++r) {
            hist.U(r, k) = u[r];
            hist.V(r, k) = v[r];
        }
    }
    return hist;
}

ResponseHistory solve(const AssembledSystem& system, const PulseLoad& pulse,
                      SolveMethod method, const TimeGrid& grid,
                      const SolveOptions& options) {
    const LoadVector lv = load_vector(system, pulse);

    switch (method) {
    case SolveMethod::modal_undamped: {
        const double c_scale = system.C.cwiseAbs().maxCoeff();
        if (c_scale > 0.0 && !options.force_undamped_modal)
            throw ConfigError(
                "modal superposition requires an undamped system; rebuild without "
                "damping or pick the state-space method");
        const ModalBasis basis = modal_decompose(system.M, system.K);
        ResponseHistory hist = undamped_modal_response(basis, lv.dof, pulse, grid);
        return hist;
    }
    case SolveMethod::state_space: {
        const StateBasis basis = state_decompose(modal_decompose(system.M, system.K),
                                                 system.C);
        return damped_state_response(basis, lv.dof, pulse, grid);
    }
    case SolveMethod::newmark:
        return newmark_integrate(system.M, system.C, system.K, lv.dof, pulse, grid,
                                 options.newmark);
    }
    throw ConfigError("solve: unknown method");
}

} // namespace raildyn
