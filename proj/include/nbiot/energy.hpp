#pragma once

// Timeline integration, average power and battery lifetime.

#include "nbiot/procedures.hpp"

namespace nbiot {

struct EnergyBreakdown {
    Millijoule ra_sync_mj{};
    Millijoule post_ra_messages_mj{};
    Millijoule drx_connected_mj{};
    Millijoule drx_idle_mj{};
    Millijoule drx_mj{};
    Millijoule psm_mj{};
    Millijoule total_mj{};

    double share(Millijoule part) const { return total_mj.value > 0.0 ? part.value / total_mj.value : 0.0; }
};

struct CategoryTotals {
    Millijoule by[5]{};
    Duration busy{};  // everything that is not PSM sleep

    Millijoule& operator[](EnergyCategory c) { return by[static_cast<int>(c)]; }
    const Millijoule& operator[](EnergyCategory c) const { return by[static_cast<int>(c)]; }
};

inline CategoryTotals integrate(const Timeline& tl) {
    CategoryTotals t;
    for (const auto& iv : tl.intervals()) {
        t[iv.category] += energy(iv.power, iv.length);
        if (iv.category != EnergyCategory::Psm) t.busy += iv.length;
    }
    return t;
}

inline EnergyBreakdown make_breakdown(const CategoryTotals& t) {
    EnergyBreakdown b;
    b.ra_sync_mj = t[EnergyCategory::RaSync];
    b.post_ra_messages_mj = t[EnergyCategory::PostRaMessages];
    b.drx_connected_mj = t[EnergyCategory::ConnectedDrx];
    b.drx_idle_mj = t[EnergyCategory::IdleDrx];
    b.drx_mj = b.drx_connected_mj + b.drx_idle_mj;
    b.psm_mj = t[EnergyCategory::Psm];
    b.total_mj = b.ra_sync_mj + b.post_ra_messages_mj + b.drx_mj + b.psm_mj;
    return b;
}

// Energy of one inter-arrival period. Flows that carry no TAU of their own are
// charged the periodic TAU fractionally (iat / TAU period), with the matching
// slice of PSM time removed.
inline EnergyBreakdown cycle_energy(const ValidatedScenario& vs, const MessageCatalog& cat = builtin_catalog()) {
    if (vs->psm_only) return make_breakdown(integrate(psm_only_timeline(vs)));

    const ProcedureFlow flow = build_flow(vs, cat);
    CategoryTotals t = integrate(flow_timeline(flow, vs));
    if (!flow.includes_tau) {
        const CategoryTotals tau = integrate(event_timeline(build_tau_flow(vs, cat), vs));
        const double f = static_cast<double>(vs->iat.count()) /
                         static_cast<double>(vs->timers.psm_tau_period.count());
        for (auto c : {EnergyCategory::RaSync, EnergyCategory::PostRaMessages, EnergyCategory::ConnectedDrx,
                       EnergyCategory::IdleDrx}) {
            t[c] += tau[c] * f;
        }
        const double displaced_us = f * static_cast<double>(tau.busy.count());
        const Milliwatt sleep_power = flow.paging ? Milliwatt{} : vs->power.deep_sleep_mw;
        t[EnergyCategory::Psm] = t[EnergyCategory::Psm] - Millijoule{sleep_power.value * displaced_us * 1e-6};
    }
    return make_breakdown(t);
}

inline double average_power_w(const EnergyBreakdown& b, Duration iat) {
    return b.total_mj.value * 1e-3 / to_s(iat);
}

inline double average_power_w(const ValidatedScenario& vs, const MessageCatalog& cat = builtin_catalog()) {
    return average_power_w(cycle_energy(vs, cat), vs->iat);
}

inline double lifetime_hours(double battery_wh, double avg_power_w) { return battery_wh / avg_power_w; }

inline double battery_lifetime_years(double battery_wh, double avg_power_w) {
    return lifetime_hours(battery_wh, avg_power_w) / kHoursPerYear;
}

inline double battery_lifetime_years(const ValidatedScenario& vs, const MessageCatalog& cat = builtin_catalog()) {
    return battery_lifetime_years(vs->battery_wh, average_power_w(vs, cat));
}

}  // namespace nbiot
