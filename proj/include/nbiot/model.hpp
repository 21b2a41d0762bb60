#pragma once

// Domain types shared by every module: coverage/power/timer catalogs, the
// Scenario value, and its validation.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nbiot/error.hpp"
#include "nbiot/tbs_table.hpp"
#include "nbiot/units.hpp"

namespace nbiot {

enum class Procedure { SR, CP, UP };
enum class TrafficCase { UL, UL_ACK, DL, DL_ACK };
enum class CoverageLevel { Normal, Robust, Extreme };
enum class Modulation { QPSK, BPSK };
enum class MtReachability { PSM_TAU, DRX_PAGING };
enum class Direction { UL, DL };
enum class ChannelKind { NPRACH, NPUSCH, NPDCCH, NPDSCH };

inline constexpr std::array kProcedures{Procedure::SR, Procedure::CP, Procedure::UP};
inline constexpr std::array kTrafficCases{TrafficCase::UL, TrafficCase::UL_ACK, TrafficCase::DL,
                                          TrafficCase::DL_ACK};
inline constexpr std::array kCoverageLevels{CoverageLevel::Normal, CoverageLevel::Robust,
                                            CoverageLevel::Extreme};
// Also the deterministic tie-break order for bottleneck selection.
inline constexpr std::array kChannelOrder{ChannelKind::NPDCCH, ChannelKind::NPDSCH,
                                          ChannelKind::NPUSCH, ChannelKind::NPRACH};

namespace detail {

template <class E, std::size_t N>
struct EnumNames {
    std::array<std::pair<E, std::string_view>, N> entries;

    constexpr std::string_view name(E e) const {
        for (const auto& [v, n] : entries) {
            if (v == e) return n;
        }
        return "?";
    }
    std::optional<E> parse(std::string_view s) const {
        for (const auto& [v, n] : entries) {
            if (n == s) return v;
        }
        return std::nullopt;
    }
};

inline constexpr EnumNames<Procedure, 3> kProcedureNames{
    {{{Procedure::SR, "SR"}, {Procedure::CP, "CP"}, {Procedure::UP, "UP"}}}};
inline constexpr EnumNames<TrafficCase, 4> kCaseNames{{{{TrafficCase::UL, "UL"},
                                                        {TrafficCase::UL_ACK, "UL_ACK"},
                                                        {TrafficCase::DL, "DL"},
                                                        {TrafficCase::DL_ACK, "DL_ACK"}}}};
inline constexpr EnumNames<CoverageLevel, 3> kCoverageNames{{{{CoverageLevel::Normal, "Normal"},
                                                              {CoverageLevel::Robust, "Robust"},
                                                              {CoverageLevel::Extreme, "Extreme"}}}};
inline constexpr EnumNames<Modulation, 2> kModulationNames{
    {{{Modulation::QPSK, "QPSK"}, {Modulation::BPSK, "BPSK"}}}};
inline constexpr EnumNames<MtReachability, 2> kReachabilityNames{
    {{{MtReachability::PSM_TAU, "PSM_TAU"}, {MtReachability::DRX_PAGING, "DRX_PAGING"}}}};
inline constexpr EnumNames<Direction, 2> kDirectionNames{
    {{{Direction::UL, "UL"}, {Direction::DL, "DL"}}}};
inline constexpr EnumNames<ChannelKind, 4> kChannelNames{{{{ChannelKind::NPRACH, "NPRACH"},
                                                           {ChannelKind::NPUSCH, "NPUSCH"},
                                                           {ChannelKind::NPDCCH, "NPDCCH"},
                                                           {ChannelKind::NPDSCH, "NPDSCH"}}}};

template <class E, std::size_t N>
E parse_or_throw(const EnumNames<E, N>& names, std::string_view s, std::string_view what) {
    if (auto v = names.parse(s)) return *v;
    throw ConfigError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

}  // namespace detail

inline std::string_view to_string(Procedure p) { return detail::kProcedureNames.name(p); }
inline std::string_view to_string(TrafficCase c) { return detail::kCaseNames.name(c); }
inline std::string_view to_string(CoverageLevel c) { return detail::kCoverageNames.name(c); }
inline std::string_view to_string(Modulation m) { return detail::kModulationNames.name(m); }
inline std::string_view to_string(MtReachability m) { return detail::kReachabilityNames.name(m); }
inline std::string_view to_string(Direction d) { return detail::kDirectionNames.name(d); }
inline std::string_view to_string(ChannelKind c) { return detail::kChannelNames.name(c); }

inline Procedure parse_procedure(std::string_view s) {
    return detail::parse_or_throw(detail::kProcedureNames, s, "procedure");
}
inline TrafficCase parse_traffic_case(std::string_view s) {
    // Accept the hyphenated spelling used in figures as well.
    if (s == "UL-ACK") return TrafficCase::UL_ACK;
    if (s == "DL-ACK") return TrafficCase::DL_ACK;
    return detail::parse_or_throw(detail::kCaseNames, s, "traffic case");
}
inline CoverageLevel parse_coverage_level(std::string_view s) {
    return detail::parse_or_throw(detail::kCoverageNames, s, "coverage profile");
}
inline Modulation parse_modulation(std::string_view s) {
    return detail::parse_or_throw(detail::kModulationNames, s, "modulation");
}
inline MtReachability parse_mt_reachability(std::string_view s) {
    return detail::parse_or_throw(detail::kReachabilityNames, s, "mt reachability");
}
inline Direction parse_direction(std::string_view s) {
    return detail::parse_or_throw(detail::kDirectionNames, s, "direction");
}
inline ChannelKind parse_channel(std::string_view s) {
    return detail::parse_or_throw(detail::kChannelNames, s, "channel");
}

inline bool is_downlink(ChannelKind c) {
    return c == ChannelKind::NPDCCH || c == ChannelKind::NPDSCH;
}
inline bool is_mobile_terminated(TrafficCase c) {
    return c == TrafficCase::DL || c == TrafficCase::DL_ACK;
}

// ---------------------------------------------------------------------------

struct CoverageProfile {
    CoverageLevel name{CoverageLevel::Normal};
    Decibel target_mcl_db{144.0};
    double subcarrier_spacing_khz{15.0};
    int ul_subcarriers_per_burst{12};
    Modulation modulation{Modulation::QPSK};
    // NPUSCH MCS. NPDSCH is QPSK-only and is configured separately below.
    int mcs_index{9};
    int dl_mcs_index{9};
    int rep_npdcch{1};
    int rep_npdsch{1};
    int rep_npusch{2};
    int rep_nprach{1};
    int r_max{1};
    double g_factor{32.0};
    double resource_share{0.33};
    // Preamble format 1: 4 symbol groups of 1.6 ms each.
    Duration nprach_preamble_duration{6400};
    // Multiplier applied to Scenario::sync_time for this coverage level.
    int sync_scale{1};

    bool operator==(const CoverageProfile&) const = default;
};

// Table values for the three coverage classes.
inline CoverageProfile builtin_coverage_profile(CoverageLevel level) {
    CoverageProfile c;
    c.name = level;
    switch (level) {
        case CoverageLevel::Normal:
            break;
        case CoverageLevel::Robust:
            c.target_mcl_db = Decibel{154.0};
            c.ul_subcarriers_per_burst = 3;
            c.mcs_index = 3;
            c.dl_mcs_index = 3;
            c.rep_npdcch = 64;
            c.rep_npdsch = 32;
            c.rep_npusch = 16;
            c.rep_nprach = 8;
            c.r_max = 64;
            c.g_factor = 1.5;
            c.sync_scale = 2;
            break;
        case CoverageLevel::Extreme:
            c.target_mcl_db = Decibel{161.0};
            c.subcarrier_spacing_khz = 3.75;
            c.ul_subcarriers_per_burst = 1;
            c.modulation = Modulation::BPSK;
            c.mcs_index = 0;
            c.dl_mcs_index = 2;
            c.rep_npdcch = 512;
            c.rep_npdsch = 256;
            c.rep_npusch = 1;
            c.rep_nprach = 32;
            c.r_max = 512;
            c.g_factor = 1.5;
            c.sync_scale = 4;
            break;
    }
    return c;
}

inline CoverageProfile builtin_coverage_profile(std::string_view name) {
    return builtin_coverage_profile(parse_coverage_level(name));
}

struct PowerProfile {
    Milliwatt deep_sleep_mw{0.015};
    Milliwatt inactive_mw{3.0};
    Milliwatt rx_mw{90.0};
    Milliwatt tx_max_mw{545.0};
    Dbm p_cmax_dbm{23.0};
    Dbm p_o_npusch_dbm{-100.0};
    double alpha{1.0};
    Dbm initial_received_target_power_dbm{-100.0};
    Decibel delta_preamble_db{0.0};
    Decibel power_ramping_step_db{0.0};

    bool operator==(const PowerProfile&) const = default;

    // State powers multiplied by k; power-control parameters untouched.
    PowerProfile scaled(double k) const {
        PowerProfile p = *this;
        p.deep_sleep_mw = deep_sleep_mw * k;
        p.inactive_mw = inactive_mw * k;
        p.rx_mw = rx_mw * k;
        p.tx_max_mw = tx_max_mw * k;
        return p;
    }
};

struct TrafficModel {
    int data_payload_bytes{20};
    int protocol_overhead_bytes{44};
    int ack_payload_bytes{0};

    int data_bytes() const { return data_payload_bytes + protocol_overhead_bytes; }
    int ack_bytes() const { return ack_payload_bytes + protocol_overhead_bytes; }

    bool operator==(const TrafficModel&) const = default;
};

struct InactivityTimer {
    enum class Unit { Seconds, NpdcchPeriods };
    double value{0.0};
    Unit unit{Unit::Seconds};

    bool operator==(const InactivityTimer&) const = default;
};

// How the rx window of each idle-mode long DRX cycle is charged.
enum class IdleOnDuration { NpdcchPeriod, RMax };

struct TimerConfig {
    InactivityTimer connected_inactivity_cp{5.0, InactivityTimer::Unit::NpdcchPeriods};
    InactivityTimer connected_inactivity_up_sr{0.0, InactivityTimer::Unit::Seconds};
    Duration idle_active_timer_base{from_s(10.0)};
    int idle_active_timer_cycles{2};
    Duration drx_long_cycle_base{from_ms(2048.0)};
    Duration psm_tau_period{from_s(5.0 * 24.0 * kSecondsPerHour)};
    IdleOnDuration idle_on_duration{IdleOnDuration::NpdcchPeriod};

    bool operator==(const TimerConfig&) const = default;
};

struct RandomAccessConfig {
    int attempt_cap{10};
    Duration opportunity_period{from_ms(40.0)};
    Duration rar_gap{from_ms(4.0)};

    bool operator==(const RandomAccessConfig&) const = default;
};

// Inputs to the per-channel budget derivation; the optional overrides replace
// the derived value for that channel (units per second, before the coverage
// share is applied).
struct CapacityConfig {
    double dl_subframes_per_s{1000.0};
    double dl_signal_availability{0.75};
    double inband_control_factor{11.0 / 14.0};
    double ul_subcarrier_ms_per_s{12000.0};
    int nprach_preambles_per_opportunity{12};
    Duration capacity_iat{from_s(kSecondsPerHour)};
    std::optional<double> budget_npdcch;
    std::optional<double> budget_npdsch;
    std::optional<double> budget_npusch;
    std::optional<double> budget_nprach;

    bool operator==(const CapacityConfig&) const = default;
};

struct Scenario {
    Procedure procedure{Procedure::CP};
    TrafficCase traffic_case{TrafficCase::UL};
    CoverageProfile coverage{builtin_coverage_profile(CoverageLevel::Normal)};
    Duration iat{from_s(kSecondsPerHour)};
    TrafficModel traffic;
    PowerProfile power;
    TimerConfig timers;
    double battery_wh{5.0};
    MtReachability mt_reachability{MtReachability::PSM_TAU};
    RandomAccessConfig ra;
    CapacityConfig capacity;
    // Downlink synchronisation before the first preamble, Normal coverage.
    Duration sync_time{from_ms(230.0)};
    // No traffic and no TAU: the UE only sleeps (lifetime baseline).
    bool psm_only{false};

    bool operator==(const Scenario&) const = default;
};

// ---------------------------------------------------------------------------

inline constexpr Duration kMaxIdleDrxCycle{static_cast<std::int64_t>(2.91 * 3600.0 * 1e6)};
inline constexpr Duration kMaxPsmTime{static_cast<std::int64_t>(310.0 * 3600.0 * 1e6)};

// NPDCCH search-space period R_max * G.
inline Duration npdcch_period(const CoverageProfile& c) {
    return from_ms(static_cast<double>(c.r_max) * c.g_factor);
}

struct ResolvedTimers {
    Duration npdcch_period{};
    Duration idle_drx_cycle{};
    Duration sync_time{};

    bool operator==(const ResolvedTimers&) const = default;
};

// A scenario that passed every invariant, with the derived timers attached.
class ValidatedScenario {
public:
    const Scenario& scenario() const noexcept { return scenario_; }
    const ResolvedTimers& timers() const noexcept { return timers_; }
    const Scenario* operator->() const noexcept { return &scenario_; }

private:
    ValidatedScenario(Scenario s, ResolvedTimers t) : scenario_(std::move(s)), timers_(t) {}
    friend ValidatedScenario validate_scenario(const Scenario& s);

    Scenario scenario_;
    ResolvedTimers timers_;
};

namespace detail {

inline bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace detail

inline ValidatedScenario validate_scenario(const Scenario& s) {
    std::vector<ValidationIssue> issues;
    auto fail = [&](std::string field, std::string msg) {
        issues.push_back({std::move(field), std::move(msg)});
    };

    const auto& c = s.coverage;
    const std::pair<const char*, int> reps[] = {{"coverage.rep_npdcch", c.rep_npdcch},
                                                {"coverage.rep_npdsch", c.rep_npdsch},
                                                {"coverage.rep_npusch", c.rep_npusch},
                                                {"coverage.rep_nprach", c.rep_nprach},
                                                {"coverage.r_max", c.r_max}};
    for (const auto& [field, v] : reps) {
        if (!detail::is_power_of_two(v) || v > 2048) {
            fail(field, "must be a power of two in [1, 2048], got " + std::to_string(v));
        }
    }
    if (!(c.resource_share > 0.0 && c.resource_share <= 1.0)) {
        fail("coverage.resource_share", "must be in (0, 1]");
    }
    if (c.subcarrier_spacing_khz != 15.0 && c.subcarrier_spacing_khz != 3.75) {
        fail("coverage.subcarrier_spacing_khz", "must be 15 or 3.75");
    }
    if (c.subcarrier_spacing_khz == 3.75 && c.ul_subcarriers_per_burst != 1) {
        fail("coverage.ul_subcarriers", "3.75 kHz spacing requires a single subcarrier");
    }
    if (c.subcarrier_spacing_khz == 15.0) {
        const int sc = c.ul_subcarriers_per_burst;
        if (sc != 1 && sc != 3 && sc != 6 && sc != 12) {
            fail("coverage.ul_subcarriers", "15 kHz allocations are 1, 3, 6 or 12");
        }
    }
    const double period_ms = static_cast<double>(c.r_max) * c.g_factor;
    if (!(c.g_factor > 0.0) || std::abs(period_ms - std::round(period_ms)) > 1e-9) {
        fail("coverage.g_factor", "r_max * g_factor must be a whole number of milliseconds");
    }
    const int ul_mcs_max = c.ul_subcarriers_per_burst == 1 ? 10 : npusch_tbs_table().row_count() - 1;
    if (c.mcs_index < 0 || c.mcs_index > ul_mcs_max) {
        fail("coverage.mcs", "must be in [0, " + std::to_string(ul_mcs_max) + "] for this allocation");
    }
    const int dl_mcs_max = npdsch_tbs_table().row_count() - 1;
    if (c.dl_mcs_index < 0 || c.dl_mcs_index > dl_mcs_max) {
        fail("coverage.dl_mcs", "must be in [0, " + std::to_string(dl_mcs_max) + "]");
    }
    if (c.nprach_preamble_duration <= Duration::zero()) {
        fail("coverage.nprach_preamble_ms", "must be > 0");
    }
    if (c.sync_scale < 1) fail("coverage.sync_scale", "must be >= 1");

    const auto& p = s.power;
    if (!(0.0 < p.deep_sleep_mw.value && p.deep_sleep_mw < p.inactive_mw &&
          p.inactive_mw < p.rx_mw && p.rx_mw < p.tx_max_mw)) {
        fail("power", "requires 0 < deep_sleep < inactive < rx < tx_max");
    }
    if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) fail("power.alpha", "must be in [0, 1]");

    const auto& t = s.traffic;
    if (t.data_payload_bytes < 0) fail("traffic.payload_bytes", "must be >= 0");
    if (t.ack_payload_bytes < 0) fail("traffic.ack_payload_bytes", "must be >= 0");
    if (t.protocol_overhead_bytes < 0) fail("traffic.overhead_bytes", "must be >= 0");
    if (t.data_bytes() <= 0) fail("traffic", "data message would be empty");

    if (s.iat <= Duration::zero()) fail("iat", "must be > 0");
    if (!(s.battery_wh > 0.0)) fail("battery_wh", "must be > 0");
    if (s.sync_time < Duration::zero()) fail("sync_ms", "must be >= 0");

    const auto& tm = s.timers;
    const Duration period = from_ms(period_ms);
    const Duration cycle = tm.drx_long_cycle_base + period;
    if (cycle > kMaxIdleDrxCycle) {
        fail("timers.drx_long_cycle_base_s", "resolved idle DRX cycle exceeds the 2.91 h maximum");
    }
    if (tm.psm_tau_period <= Duration::zero() || tm.psm_tau_period > kMaxPsmTime) {
        fail("timers.psm_tau_period_s", "must be in (0, 310 h]");
    }
    if (tm.idle_active_timer_base < Duration::zero() || tm.idle_active_timer_cycles < 0) {
        fail("timers.active_timer_base_s", "must be >= 0");
    }
    if (tm.connected_inactivity_cp.value < 0.0 || tm.connected_inactivity_up_sr.value < 0.0) {
        fail("timers.cp_inactivity", "must be >= 0");
    }

    if (s.ra.attempt_cap < 1) fail("ra.attempt_cap", "must be >= 1");
    if (s.ra.opportunity_period <= Duration::zero()) fail("ra.opportunity_ms", "must be > 0");
    if (s.ra.rar_gap < Duration::zero()) fail("ra.rar_gap_ms", "must be >= 0");

    const auto& cap = s.capacity;
    if (!(cap.dl_subframes_per_s > 0.0 && cap.dl_signal_availability > 0.0 &&
          cap.inband_control_factor > 0.0 && cap.ul_subcarrier_ms_per_s > 0.0 &&
          cap.nprach_preambles_per_opportunity > 0 && cap.capacity_iat > Duration::zero())) {
        fail("capacity", "budget inputs must be > 0");
    }
    for (const auto& b : {cap.budget_npdcch, cap.budget_npdsch, cap.budget_npusch,
                          cap.budget_nprach}) {
        if (b && !(*b > 0.0)) fail("capacity.budget", "overrides must be > 0");
    }

    if (!issues.empty()) throw ValidationError(std::move(issues));

    ResolvedTimers resolved{period, cycle, s.sync_time * c.sync_scale};
    return ValidatedScenario{s, resolved};
}

// The three builtin profiles must not claim more than the whole cell.
inline bool builtin_shares_consistent() {
    double total = 0.0;
    for (auto l : kCoverageLevels) total += builtin_coverage_profile(l).resource_share;
    return total <= 1.0 + 1e-12;
}

}  // namespace nbiot
