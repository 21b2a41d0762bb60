#pragma once

// Per-channel resource usage per report and the resulting cell capacity.

#include <array>
#include <cmath>
#include <optional>

#include "nbiot/procedures.hpp"

namespace nbiot {

// Indexed by ChannelKind. Units: NPDCCH/NPDSCH subframes, NPUSCH
// subcarrier-milliseconds, NPRACH preamble slots.
struct ChannelUsage {
    std::array<double, 4> units{};

    double& operator[](ChannelKind c) { return units[static_cast<std::size_t>(c)]; }
    double operator[](ChannelKind c) const { return units[static_cast<std::size_t>(c)]; }

    ChannelUsage& operator+=(const ChannelUsage& o) {
        for (std::size_t i = 0; i < units.size(); ++i) units[i] += o.units[i];
        return *this;
    }
    ChannelUsage operator*(double k) const {
        ChannelUsage out = *this;
        for (auto& u : out.units) u *= k;
        return out;
    }
};

struct ChannelBudget {
    ChannelKind channel{ChannelKind::NPDCCH};
    double available_units_per_s{0.0};
};

struct CapacityReport {
    ChannelUsage per_channel_usage;
    std::array<ChannelBudget, 4> budgets{};
    ChannelKind bottleneck{ChannelKind::NPDCCH};
    double reports_per_hour{0.0};
    std::optional<double> gain_vs_sr_pct;
};

// Whole-cell budgets before the per-coverage share.
inline std::array<ChannelBudget, 4> channel_budgets(const CapacityConfig& cfg, const RandomAccessConfig& ra) {
    const double dl = cfg.dl_subframes_per_s * cfg.dl_signal_availability * cfg.inband_control_factor;
    const double nprach = cfg.nprach_preambles_per_opportunity * (1.0 / to_s(ra.opportunity_period));
    std::array<ChannelBudget, 4> out{};
    for (auto ch : kChannelOrder) {
        double v = 0.0;
        std::optional<double> override_v;
        switch (ch) {
            case ChannelKind::NPDCCH: v = dl; override_v = cfg.budget_npdcch; break;
            case ChannelKind::NPDSCH: v = dl; override_v = cfg.budget_npdsch; break;
            case ChannelKind::NPUSCH: v = cfg.ul_subcarrier_ms_per_s; override_v = cfg.budget_npusch; break;
            case ChannelKind::NPRACH: v = nprach; override_v = cfg.budget_nprach; break;
        }
        out[static_cast<std::size_t>(ch)] = {ch, override_v.value_or(v)};
    }
    return out;
}

inline ChannelUsage flow_channel_usage(const ProcedureFlow& f, const CoverageProfile& c,
                                       const RandomAccessConfig& ra) {
    ChannelUsage u;
    const double dci = message_airtime(0, c, ChannelKind::NPDCCH).resource_units();
    if (f.includes_ra) {
        const double e = expected_attempts(ra.attempt_cap);
        const Airtime pre = message_airtime(0, c, ChannelKind::NPRACH);
        // Preamble slots: opportunities spanned by one repeated preamble.
        const double slots = std::ceil(static_cast<double>(pre.duration.count()) /
                                       static_cast<double>(ra.opportunity_period.count()));
        u[ChannelKind::NPRACH] += e * slots;
        u[ChannelKind::NPDCCH] += e * dci;
        u[ChannelKind::NPDSCH] += e * message_airtime(f.rar_bytes, c, ChannelKind::NPDSCH).resource_units();
    }
    for (const auto& m : f.messages) {
        u[m.channel] += message_airtime(m.size_bytes, c, m.channel).resource_units();
        u[ChannelKind::NPDCCH] += dci;
    }
    return u;
}

// Usage per report at the capacity IAT, periodic TAU included.
inline ChannelUsage report_usage(const ValidatedScenario& vs, const MessageCatalog& cat = builtin_catalog()) {
    const ProcedureFlow flow = build_flow(vs, cat);
    ChannelUsage u = flow_channel_usage(flow, vs->coverage, vs->ra);
    if (!flow.includes_tau) {
        const double f = static_cast<double>(vs->capacity.capacity_iat.count()) /
                         static_cast<double>(vs->timers.psm_tau_period.count());
        u += flow_channel_usage(build_tau_flow(vs, cat), vs->coverage, vs->ra) * f;
    }
    return u;
}

inline CapacityReport capacity_from_usage(const ChannelUsage& u, const std::array<ChannelBudget, 4>& budgets,
                                          double share) {
    CapacityReport r;
    r.per_channel_usage = u;
    r.budgets = budgets;
    bool any = false;
    for (auto ch : kChannelOrder) {
        if (!(u[ch] > 0.0)) continue;
        const double per_hour =
            share * budgets[static_cast<std::size_t>(ch)].available_units_per_s / u[ch] * kSecondsPerHour;
        if (!any || per_hour < r.reports_per_hour) {
            r.reports_per_hour = per_hour;
            r.bottleneck = ch;
            any = true;
        }
    }
    if (!any) throw DomainError("flow uses no radio resources");
    return r;
}

inline CapacityReport cell_capacity(const ValidatedScenario& vs, const MessageCatalog& cat = builtin_catalog()) {
    return capacity_from_usage(report_usage(vs, cat), channel_budgets(vs->capacity, vs->ra),
                               vs->coverage.resource_share);
}

inline double capacity_gain_pct(const CapacityReport& opt, const CapacityReport& sr) {
    if (!(sr.reports_per_hour > 0.0)) throw DomainError("SR capacity must be > 0");
    return (opt.reports_per_hour / sr.reports_per_hour - 1.0) * 100.0;
}

}  // namespace nbiot
