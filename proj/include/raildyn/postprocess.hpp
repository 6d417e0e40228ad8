#pragma once

#include "raildyn/response.hpp"
#include "raildyn/track.hpp"
#include "raildyn/types.hpp"

#include <string>
#include <vector>

namespace raildyn {

/// Per-sleeper ballast loads derived from a response history.
///
/// `force` holds the nominal per-sleeper force k_b*u + c_b*udot (one row per
/// sleeper); this is the quantity tabulated as "% of load". `transmitted_peak`
/// weights each sleeper by its assembled ballast multiplicity (interior
/// sleepers are shared by two sections), which is the force balance the
/// substructure actually sees; only the transmitted forces sum to the applied
/// load in the static limit.
struct SubstructureLoads {
    std::vector<int> sleeper_dofs;
    std::vector<double> multiplicity;
    RowMat force;
    Vec peak;
    Vec percent;
    Vec impulse_share;
    Vec transmitted_peak;
    double p0 = 0.0;

    int n_sleepers() const { return static_cast<int>(sleeper_dofs.size()); }
};

SubstructureLoads substructure_forces(const ResponseHistory& history,
                                      const AssembledSystem& system);

/// Sleeper-window percentage table across several load cases (columns).
/// Percentages below `threshold_percent` render as "-" but keep their value.
struct RepartitionTable {
    std::vector<int> sleepers;
    std::vector<std::string> labels;
    Mat percent;
    double threshold_percent = 1.5;

    std::string cell(int row, int col) const;
};

RepartitionTable repartition_table(const std::vector<SubstructureLoads>& cases,
                                   const std::vector<std::string>& labels,
                                   int center_sleeper, int half_width = 3,
                                   double threshold_percent = 1.5);

struct PeakEntry {
    int dof = -1;
    double value = 0.0;
    double at_time = 0.0;
    std::string label;
};

/// Per-DOF signed extremes with timestamps, plus the rail-translation and
/// sleeper extremes singled out.
struct PeakSummary {
    std::vector<PeakEntry> entries;
    PeakEntry rail_peak;
    PeakEntry sleeper_peak;
};

PeakSummary peak_summary(const ResponseHistory& history, const AssembledSystem& system);

} // namespace raildyn
