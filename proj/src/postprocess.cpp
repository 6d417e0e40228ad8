#include "raildyn/postprocess.hpp"

#include "raildyn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace raildyn {
namespace {

enum class DofKind { rail, rotation, sleeper };

struct DofInfo {
    DofKind kind = DofKind::rail;
    int ordinal = 0; // 1-based node or sleeper number
};

std::vector<DofInfo> classify_dofs(const AssembledSystem& system) {
    std::vector<DofInfo> info(system.n_dof);
    for (int j = 0; j < system.n_sections; ++j) {
        const auto& map = system.dof_map[j];
        for (int l = 0; l < 6; ++l) {
            const int node = 2 * j + l / 2;
            info[map[l]] = {l % 2 == 0 ? DofKind::rail : DofKind::rotation, node + 1};
        }
        info[map[6]] = {DofKind::sleeper, j + 1};
        info[map[7]] = {DofKind::sleeper, j + 2};
    }
    return info;
}

std::string dof_label(const DofInfo& d) {
    char buf[48];
    switch (d.kind) {
    case DofKind::rail:
        std::snprintf(buf, sizeof buf, "rail node %d", d.ordinal);
        break;
    case DofKind::rotation:
        std::snprintf(buf, sizeof buf, "rotation node %d", d.ordinal);
        break;
    case DofKind::sleeper:
        std::snprintf(buf, sizeof buf, "sleeper %d", d.ordinal);
        break;
    }
    return buf;
}

double trapezoid(const double* f, int n, double dt) {
    if (n < 2) return 0.0;
    double acc = 0.5 * (f[0] + f[n - 1]);
    for (int k = 1; k < n - 1; ++k) acc += f[k];
    return acc * dt;
}

} // namespace

SubstructureLoads substructure_forces(const ResponseHistory& history,
                                      const AssembledSystem& system) {
    if (history.U.rows() != system.n_dof)
        throw ModelError("substructure_forces: history does not match the system");
    if (history.V.rows() != history.U.rows() || history.V.cols() != history.U.cols())
        throw ModelError("substructure_forces: history lacks velocity data");
    if (history.meta.pulse.P0 <= 0.0)
        throw ModelError("substructure_forces: history carries no load amplitude");

    const auto& ker = kernels::active();
    const double kb = system.props.k_b;
    const double cb = system.props.c_b;
    const int samples = static_cast<int>(history.U.cols());

    SubstructureLoads out;
    out.sleeper_dofs = system.sleeper_dofs();
    out.multiplicity = system.sleeper_ballast_multiplicity();
    out.p0 = history.meta.pulse.P0;

    const int ns = out.n_sleepers();
    out.force.resize(ns, samples);
    out.peak.resize(ns);
    out.percent.resize(ns);
    out.impulse_share.resize(ns);
    out.transmitted_peak.resize(ns);

    Vec impulse(ns);
    std::vector<double> transmitted(samples);
    for (int s = 0; s < ns; ++s) {
        const int dof = out.sleeper_dofs[s];
        for (int k = 0; k < samples; ++k)
            out.force(s, k) = kb * history.U(dof, k) + cb * history.V(dof, k);

        const double* row = out.force.data() + static_cast<std::ptrdiff_t>(s) * samples;
        const int at = ker.absmax_index(row, samples);
        out.peak[s] = std::abs(row[at]);
        out.percent[s] = 100.0 * out.peak[s] / out.p0;

        const double mult = out.multiplicity[s];
        for (int k = 0; k < samples; ++k) transmitted[k] = mult * row[k];
        out.transmitted_peak[s] = mult * out.peak[s];
        impulse[s] = trapezoid(transmitted.data(), samples, history.grid.dt);
    }

    const double total = impulse.sum();
    if (std::abs(total) > 0.0)
        out.impulse_share = 100.0 * impulse / total;
    else
        out.impulse_share.setZero();
    return out;
}

std::string RepartitionTable::cell(int row, int col) const {
    const double p = percent(row, col);
    if (p < threshold_percent) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", p);
    return buf;
}

RepartitionTable repartition_table(const std::vector<SubstructureLoads>& cases,
                                   const std::vector<std::string>& labels,
                                   int center_sleeper, int half_width,
                                   double threshold_percent) {
    if (cases.empty()) throw ModelError("repartition_table: no load cases supplied");
    if (labels.size() != cases.size())
        throw ModelError("repartition_table: one label required per case");
    const int ns = cases.front().n_sleepers();
    for (const auto& c : cases)
        if (c.n_sleepers() != ns)
            throw ModelError("repartition_table: cases disagree on sleeper count");
    if (center_sleeper < 1 || center_sleeper > ns)
        throw ModelError("repartition_table: center sleeper out of range");
    if (half_width < 0) throw ModelError("repartition_table: negative window");

    const int lo = std::max(1, center_sleeper - half_width);
    const int hi = std::min(ns, center_sleeper + half_width);

    RepartitionTable table;
    table.labels = labels;
    table.threshold_percent = threshold_percent;
    table.percent.resize(hi - lo + 1, static_cast<int>(cases.size()));
    for (int s = lo; s <= hi; ++s) {
        table.sleepers.push_back(s);
        for (std::size_t c = 0; c < cases.size(); ++c)
            table.percent(s - lo, static_cast<int>(c)) = cases[c].percent[s - 1];
    }
    return table;
}

PeakSummary peak_summary(const ResponseHistory& history, const AssembledSystem& system) {
    if (history.U.rows() != system.n_dof)
        throw ModelError("peak_summary: history does not match the system");
    if (history.U.cols() < 1) throw ModelError("peak_summary: empty history");

    const auto& ker = kernels::active();
    const auto info = classify_dofs(system);
    const int samples = static_cast<int>(history.U.cols());

    PeakSummary out;
    out.entries.resize(system.n_dof);
    double rail_best = -1.0, sleeper_best = -1.0;
    for (int r = 0; r < system.n_dof; ++r) {
        const double* row = history.U.data() + static_cast<std::ptrdiff_t>(r) * samples;
        const int at = ker.absmax_index(row, samples);
        PeakEntry& e = out.entries[r];
        e.dof = r;
        e.value = row[at];
        e.at_time = history.grid.t(at);
        e.label = dof_label(info[r]);

        const double mag = std::abs(e.value);
        if (info[r].kind == DofKind::rail && mag > rail_best) {
            rail_best = mag;
            out.rail_peak = e;
        } else if (info[r].kind == DofKind::sleeper && mag > sleeper_best) {
            sleeper_best = mag;
            out.sleeper_peak = e;
        }
    }
    return out;
}

} // namespace raildyn
