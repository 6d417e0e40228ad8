#pragma once

#include "raildyn/loading.hpp"
#include "raildyn/spectral.hpp"
#include "raildyn/track.hpp"
#include "raildyn/types.hpp"

namespace raildyn {

/// Uniform sampling grid. The pulse end is snapped onto the grid so no step
/// straddles the forced/free boundary.
struct TimeGrid {
    double dt = 0.0;
    int n_steps = 0;  ///< history has n_steps + 1 samples, t = 0 .. n_steps*dt
    int td_steps = 0; ///< pulse end index; samples k <= td_steps are forced phase

    double t(int k) const { return k * dt; }
    double t_d() const { return td_steps * dt; }
    int samples() const { return n_steps + 1; }
};

/// Snaps t_d to the nearest grid point (never below one step).
TimeGrid make_grid(double dt, double duration, double t_d);

enum class SolveMethod { modal_undamped, state_space, newmark };

struct ResponseMeta {
    SolveMethod method = SolveMethod::state_space;
    PulseLoad pulse;
    int load_dof = 0; ///< 0-based
};

/// Displacement and velocity histories; one row per DOF, one column per
/// sample, rows contiguous in memory.
struct ResponseHistory {
    TimeGrid grid;
    RowMat U; ///< displacements (m, rad)
    RowMat V; ///< velocities (m/s, rad/s)
    ResponseMeta meta;
};

/// Per-mode Duhamel closed forms for an undamped system, with analytic
/// velocities; resonant and rigid-mode limit forms are substituted inside
/// guard bands so no formula is evaluated near its removable singularity.
ResponseHistory undamped_modal_response(const ModalBasis& basis, int load_dof,
                                        const PulseLoad& pulse, const TimeGrid& grid);

/// Per-mode complex closed forms through the state eigenbasis; handles any
/// symmetric damping. The reconstructed histories' imaginary residue is
/// tracked and must stay below 1e-8 of the response magnitude.
ResponseHistory damped_state_response(const StateBasis& basis, int load_dof,
                                      const PulseLoad& pulse, const TimeGrid& grid);

struct NewmarkOptions {
    double beta = 0.25;
    double gamma = 0.5;
    /// Require dt <= T_min/20 where T_min is the shortest natural period.
    /// Disable only for deliberate coarse-grid experiments.
    bool enforce_resolution = true;
};

/// Average-acceleration direct integration with zero initial conditions.
/// Accelerations are restarted from the load's right limit at grid-aligned
/// force jumps, which keeps second-order accuracy across the rectangular
/// pulse's onset and drop.
ResponseHistory newmark_integrate(const Mat& M, const Mat& C, const Mat& K,
                                  int load_dof, const PulseLoad& pulse,
                                  const TimeGrid& grid,
                                  const NewmarkOptions& options = {});

struct SolveOptions {
    NewmarkOptions newmark;
    /// Let modal_undamped run on a damped system (drops C) when true.
    bool force_undamped_modal = false;
};

/// Places the load via load_vector and dispatches to the selected solver.
/// modal_undamped rejects damped systems unless explicitly forced.
ResponseHistory solve(const AssembledSystem& system, const PulseLoad& pulse,
                      SolveMethod method, const TimeGrid& grid,
                      const SolveOptions& options = {});

} // namespace raildyn
