#pragma once

// Contention-based random access: per-attempt preamble detection and the
// expected cost of the RA phase.

#include <cmath>
#include <vector>

#include "nbiot/radio_phy.hpp"

namespace nbiot {

inline double detection_probability(int attempt) {
    if (attempt < 1) throw DomainError("preamble attempt index starts at 1");
    return 1.0 - std::exp(-static_cast<double>(attempt));
}

// Mean number of preamble transmissions. Whatever probability mass is still
// undetected at the cap is counted as `cap` attempts (truncation).
inline double expected_attempts(int cap) {
    if (cap < 1) throw DomainError("attempt cap must be >= 1");
    double mean = 0.0;
    double undetected = 1.0;
    for (int i = 1; i < cap; ++i) {
        const double p = detection_probability(i);
        mean += i * undetected * p;
        undetected *= 1.0 - p;
    }
    return mean + cap * undetected;
}

enum class RadioState { DeepSleep, Inactive, Rx, Tx };

inline std::string_view to_string(RadioState s) {
    switch (s) {
        case RadioState::DeepSleep: return "deep_sleep";
        case RadioState::Inactive: return "inactive";
        case RadioState::Rx: return "rx";
        case RadioState::Tx: return "tx";
    }
    return "?";
}

// One step of a single RA attempt; the RA phase charges each step
// expected_attempts times.
struct RaStep {
    RadioState state;
    Duration length;
    Milliwatt power;
    ChannelKind channel;  // resource the step occupies or listens to
};

struct RaOutcome {
    double expected_attempts{1.0};
    Duration expected_time{};
    Millijoule expected_energy{};
    int attempt_cap{1};
    std::vector<RaStep> attempt_steps;
};

inline Milliwatt state_power(const PowerProfile& p, RadioState s, Milliwatt tx = Milliwatt{}) {
    switch (s) {
        case RadioState::DeepSleep: return p.deep_sleep_mw;
        case RadioState::Inactive: return p.inactive_mw;
        case RadioState::Rx: return p.rx_mw;
        case RadioState::Tx: return tx;
    }
    return Milliwatt{};
}

inline Duration scale(Duration d, double k) {
    return Duration{static_cast<Duration::rep>(std::llround(static_cast<double>(d.count()) * k))};
}

inline RaOutcome ra_cost(const CoverageProfile& c, const PowerProfile& p, const RandomAccessConfig& ra,
                         int rar_bytes) {
    RaOutcome out;
    out.attempt_cap = ra.attempt_cap;
    out.expected_attempts = expected_attempts(ra.attempt_cap);

    // Ramping is a no-op with the default step, so attempt 1 stands for all.
    const Milliwatt ptx = tx_power_consumption_mw(p, nprach_tx_power_dbm(p, c.target_mcl_db, 1));
    const Airtime preamble = message_airtime(0, c, ChannelKind::NPRACH);
    const Airtime dci = message_airtime(0, c, ChannelKind::NPDCCH);
    const Airtime rar = message_airtime(rar_bytes, c, ChannelKind::NPDSCH);

    out.attempt_steps = {
        {RadioState::Inactive, ra.opportunity_period / 2, p.inactive_mw, ChannelKind::NPRACH},
        {RadioState::Tx, preamble.duration, ptx, ChannelKind::NPRACH},
        {RadioState::Rx, dci.duration, p.rx_mw, ChannelKind::NPDCCH},
        {RadioState::Inactive, ra.rar_gap, p.inactive_mw, ChannelKind::NPDSCH},
        {RadioState::Rx, rar.duration, p.rx_mw, ChannelKind::NPDSCH},
    };
    for (const auto& st : out.attempt_steps) {
        const Duration d = scale(st.length, out.expected_attempts);
        out.expected_time += d;
        out.expected_energy += energy(st.power, d);
    }
    return out;
}

inline RaOutcome ra_cost(const Scenario& s, int rar_bytes) {
    return ra_cost(s.coverage, s.power, s.ra, rar_bytes);
}

}  // namespace nbiot
