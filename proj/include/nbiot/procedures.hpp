#pragma once

// Message sequences per (procedure, traffic case) and the radio-state
// timeline of one traffic cycle.

#include <string>
#include <vector>

#include "nbiot/catalog.hpp"
#include "nbiot/random_access.hpp"

namespace nbiot {

struct SignalingMessage {
    std::string name;
    Direction direction{Direction::UL};
    Plane plane{Plane::AS};
    ChannelKind channel{ChannelKind::NPUSCH};
    int size_bytes{0};
    // The connection release; connected-mode DRX runs right before it.
    bool release{false};

    bool operator==(const SignalingMessage&) const = default;
};

struct ProcedureFlow {
    Procedure procedure{Procedure::CP};
    TrafficCase traffic_case{TrafficCase::UL};
    std::vector<SignalingMessage> messages;
    Duration connected_drx{};
    Duration idle_drx{};
    bool rai{false};
    bool includes_tau{false};
    // Sync + RA precede the first message.
    bool includes_ra{true};
    int rar_bytes{0};
    // Reachable by paging: idle DRX replaces PSM after the active timer.
    bool paging{false};

    int count(Plane p) const {
        int n = 0;
        for (const auto& m : messages) n += m.plane == p;
        return n;
    }
    int count_named(std::string_view needle) const {
        int n = 0;
        for (const auto& m : messages) n += m.name.find(needle) != std::string::npos;
        return n;
    }
};

// ---------------------------------------------------------------------------
// Timers

inline Duration resolve_inactivity(const InactivityTimer& t, Duration period) {
    if (t.unit == InactivityTimer::Unit::NpdcchPeriods) return scale(period, t.value);
    return from_s(t.value);
}

inline Duration connected_inactivity(const ValidatedScenario& vs) {
    const auto& tm = vs->timers;
    const auto& timer = vs->procedure == Procedure::CP ? tm.connected_inactivity_cp
                                                       : tm.connected_inactivity_up_sr;
    return resolve_inactivity(timer, vs.timers().npdcch_period);
}

inline double connected_inactivity_s(const ValidatedScenario& vs) {
    return to_s(connected_inactivity(vs));
}

// RAI in the last uplink NAS PDU lets the network release reachability at once.
inline Duration idle_active_timer(const ValidatedScenario& vs, bool rai) {
    if (vs->procedure == Procedure::CP && rai) return Duration::zero();
    return vs->timers.idle_active_timer_base + vs.timers().idle_drx_cycle * vs->timers.idle_active_timer_cycles;
}

inline bool case_carries_ul_data(TrafficCase c) { return c != TrafficCase::DL; }

inline double idle_active_timer_s(const ValidatedScenario& vs) {
    const bool rai = vs->procedure == Procedure::CP && case_carries_ul_data(vs->traffic_case);
    return to_s(idle_active_timer(vs, rai));
}

// ---------------------------------------------------------------------------
// Flow assembly

namespace detail {

inline std::string seg(Procedure p, std::string_view part) {
    return std::string(to_string(p)) + "." + std::string(part);
}

inline void append(std::vector<SignalingMessage>& out, const MessageCatalog& cat, const std::string& flow,
                   const TrafficModel& t) {
    for (const auto& r : cat.segment(flow)) {
        SignalingMessage m{r.name, r.direction, r.plane, r.channel, r.bytes.resolve(t), false};
        if (m.size_bytes <= 0) throw ConfigError("message " + r.name + " in " + flow + " resolves to 0 bytes");
        out.push_back(std::move(m));
    }
}

inline int rar_size(const MessageCatalog& cat, const TrafficModel& t) {
    const auto& ra = cat.segment("ra");
    if (ra.size() != 1) throw ConfigError("catalog 'ra' segment must hold exactly the RAR");
    return ra.front().bytes.resolve(t);
}

inline void finish(ProcedureFlow& f, const ValidatedScenario& vs, const MessageCatalog& cat) {
    detail::append(f.messages, cat, seg(f.procedure, "release"), vs->traffic);
    if (f.messages.empty() || f.messages.back().direction != Direction::DL) {
        throw ConfigError("release segment must end with a downlink message");
    }
    f.messages.back().release = true;
    f.rai = false;
    if (f.procedure == Procedure::CP) {
        for (const auto& m : f.messages) {
            f.rai = f.rai || (m.direction == Direction::UL && m.plane == Plane::DATA);
        }
    }
    f.connected_drx = connected_inactivity(vs);
    f.idle_drx = idle_active_timer(vs, f.rai);
    f.rar_bytes = rar_size(cat, vs->traffic);
}

}  // namespace detail

inline ProcedureFlow build_flow(const ValidatedScenario& vs, const MessageCatalog& cat = builtin_catalog()) {
    ProcedureFlow f;
    f.procedure = vs->procedure;
    f.traffic_case = vs->traffic_case;
    const auto& t = vs->traffic;
    const Procedure p = f.procedure;
    const bool mt = is_mobile_terminated(f.traffic_case);
    if (mt && vs->mt_reachability == MtReachability::DRX_PAGING) {
        detail::append(f.messages, cat, detail::seg(p, "mt_paging"), t);
        f.paging = true;
    } else if (mt) {
        detail::append(f.messages, cat, detail::seg(p, "mt"), t);
        f.includes_tau = true;
    } else {
        detail::append(f.messages, cat, detail::seg(p, "mo"), t);
    }
    if (f.traffic_case == TrafficCase::UL_ACK) detail::append(f.messages, cat, detail::seg(p, "ul_ack"), t);
    if (f.traffic_case == TrafficCase::DL_ACK) detail::append(f.messages, cat, detail::seg(p, "dl_ack"), t);
    detail::finish(f, vs, cat);
    return f;
}

// Stand-alone periodic TAU, as performed by UEs whose traffic does not
// already include one.
inline ProcedureFlow build_tau_flow(const ValidatedScenario& vs, const MessageCatalog& cat = builtin_catalog()) {
    ProcedureFlow f;
    f.procedure = vs->procedure;
    f.traffic_case = vs->traffic_case;
    detail::append(f.messages, cat, detail::seg(f.procedure, "tau"), vs->traffic);
    f.includes_tau = true;
    detail::finish(f, vs, cat);
    // The Active Timer is configured per traffic case, not per exchange: a CP
    // UE whose reports carry RAI runs none after its periodic TAU either.
    f.idle_drx = idle_active_timer(vs, build_flow(vs, cat).rai);
    return f;
}

// ---------------------------------------------------------------------------
// Timeline

enum class EnergyCategory { RaSync, PostRaMessages, ConnectedDrx, IdleDrx, Psm };

inline std::string_view to_string(EnergyCategory c) {
    switch (c) {
        case EnergyCategory::RaSync: return "ra_sync";
        case EnergyCategory::PostRaMessages: return "post_ra_messages";
        case EnergyCategory::ConnectedDrx: return "connected_drx";
        case EnergyCategory::IdleDrx: return "idle_drx";
        case EnergyCategory::Psm: return "psm";
    }
    return "?";
}

struct TimelineInterval {
    Duration start{};
    Duration length{};
    RadioState state{RadioState::DeepSleep};
    Milliwatt power{};
    EnergyCategory category{EnergyCategory::Psm};
    std::string label;

    Duration end() const { return start + length; }
};

class Timeline {
public:
    const std::vector<TimelineInterval>& intervals() const noexcept { return intervals_; }
    Duration end() const noexcept { return end_; }

    void push(RadioState st, Milliwatt p, Duration len, EnergyCategory cat, std::string label) {
        if (len < Duration::zero()) throw DomainError("negative interval: " + label);
        if (len == Duration::zero()) return;
        intervals_.push_back({end_, len, st, p, cat, std::move(label)});
        end_ += len;
    }

    void append(const Timeline& other) {
        for (const auto& iv : other.intervals_) push(iv.state, iv.power, iv.length, iv.category, iv.label);
    }

private:
    std::vector<TimelineInterval> intervals_;
    Duration end_{};
};

namespace detail {

inline Duration until_boundary(Duration t, Duration period) {
    const auto r = t % period;
    return r == Duration::zero() ? Duration::zero() : period - r;
}

// Long DRX cycles: inactive, then an rx on-duration, cut at `span`.
inline void idle_drx(Timeline& tl, const ValidatedScenario& vs, Duration span, const std::string& label) {
    const auto& p = vs->power;
    const Duration cycle = vs.timers().idle_drx_cycle;
    const Duration on = vs->timers.idle_on_duration == IdleOnDuration::RMax
                            ? from_ms(1.0) * vs->coverage.r_max
                            : vs.timers().npdcch_period;
    const Duration off = cycle - on;
    Duration done{};
    while (done < span) {
        const Duration a = std::min(off, span - done);
        tl.push(RadioState::Inactive, p.inactive_mw, a, EnergyCategory::IdleDrx, label + ".sleep");
        done += a;
        if (done >= span) break;
        const Duration b = std::min(on, span - done);
        tl.push(RadioState::Rx, p.rx_mw, b, EnergyCategory::IdleDrx, label + ".on");
        done += b;
    }
}

}  // namespace detail

// Sync, RA, every message and the DRX phases, starting at wake-up.
inline Timeline event_timeline(const ProcedureFlow& f, const ValidatedScenario& vs) {
    Timeline tl;
    const auto& c = vs->coverage;
    const auto& p = vs->power;
    const Duration period = vs.timers().npdcch_period;
    const Duration dci = message_airtime(0, c, ChannelKind::NPDCCH).duration;

    if (f.includes_ra) {
        tl.push(RadioState::Rx, p.rx_mw, vs.timers().sync_time, EnergyCategory::RaSync, "sync");
        const RaOutcome ra = ra_cost(c, p, vs->ra, f.rar_bytes);
        static constexpr const char* names[] = {"ra.wait", "ra.preamble", "ra.rar_dci", "ra.rar_gap", "ra.rar"};
        for (std::size_t i = 0; i < ra.attempt_steps.size(); ++i) {
            const auto& st = ra.attempt_steps[i];
            tl.push(st.state, st.power, scale(st.length, ra.expected_attempts), EnergyCategory::RaSync, names[i]);
        }
    }

    const Milliwatt ptx = tx_power_consumption_mw(p, npusch_tx_power_dbm(c, p, c.target_mcl_db));
    for (const auto& m : f.messages) {
        if (m.release && f.connected_drx > Duration::zero()) {
            auto cat = EnergyCategory::ConnectedDrx;
            tl.push(RadioState::Inactive, p.inactive_mw, detail::until_boundary(tl.end(), period), cat,
                    "connected_drx.align");
            const auto n = f.connected_drx / period;
            for (std::int64_t k = 0; k < n; ++k) {
                tl.push(RadioState::Rx, p.rx_mw, dci, cat, "connected_drx.pdcch");
                tl.push(RadioState::Inactive, p.inactive_mw, period - dci, cat, "connected_drx.sleep");
            }
            tl.push(RadioState::Inactive, p.inactive_mw, f.connected_drx % period, cat, "connected_drx.sleep");
        }
        const auto cat = EnergyCategory::PostRaMessages;
        tl.push(RadioState::Inactive, p.inactive_mw, detail::until_boundary(tl.end(), period), cat,
                m.name + ".align");
        tl.push(RadioState::Rx, p.rx_mw, dci, cat, m.name + ".dci");
        tl.push(RadioState::Inactive, p.inactive_mw, schedule_gap(m.channel), cat, m.name + ".gap");
        const Airtime air = message_airtime(m.size_bytes, c, m.channel);
        if (m.direction == Direction::UL) {
            tl.push(RadioState::Tx, ptx, air.duration, cat, m.name);
        } else {
            tl.push(RadioState::Rx, p.rx_mw, air.duration, cat, m.name);
        }
    }

    if (f.idle_drx > Duration::zero()) detail::idle_drx(tl, vs, f.idle_drx, "idle_drx");
    return tl;
}

// One full traffic cycle: the event timeline, then sleep until the next
// arrival. Intervals partition [0, iat) exactly.
inline Timeline flow_timeline(const ProcedureFlow& f, const ValidatedScenario& vs) {
    Timeline tl = event_timeline(f, vs);
    if (tl.end() > vs->iat) throw DomainError("traffic cycle is longer than the inter-arrival time");
    const Duration rest = vs->iat - tl.end();
    if (f.paging) {
        detail::idle_drx(tl, vs, rest, "paging_drx");
    } else {
        tl.push(RadioState::DeepSleep, vs->power.deep_sleep_mw, rest, EnergyCategory::Psm, "psm");
    }
    return tl;
}

// Traffic-free cycle used as the lifetime baseline.
inline Timeline psm_only_timeline(const ValidatedScenario& vs) {
    Timeline tl;
    tl.push(RadioState::DeepSleep, vs->power.deep_sleep_mw, vs->iat, EnergyCategory::Psm, "psm");
    return tl;
}

}  // namespace nbiot
