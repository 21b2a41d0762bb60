#pragma once

// Scenario files: whitespace-separated key=value tokens, '#' to end of line.
// `coverage=<name>` loads a builtin profile; `coverage.*` keys then override
// single fields whatever their position in the file.

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nbiot/model.hpp"

namespace nbiot {

namespace io {

inline std::string fmt_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw ConfigError("cannot format number");
    return std::string(buf, end);
}

inline double parse_double(std::string_view s, std::string_view key) {
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError("bad number for " + std::string(key) + ": '" + std::string(s) + "'");
    }
    return v;
}

inline int parse_int(std::string_view s, std::string_view key) {
    int v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) {
        throw ConfigError("bad integer for " + std::string(key) + ": '" + std::string(s) + "'");
    }
    return v;
}

inline bool parse_bool(std::string_view s, std::string_view key) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError("bad boolean for " + std::string(key) + ": '" + std::string(s) + "'");
}

// Exact decimal rendering of an integer microsecond count in `unit_us` units.
inline std::string fmt_duration(Duration d, std::int64_t unit_us) {
    const std::int64_t c = d.count();
    std::string out = c < 0 ? "-" : "";
    const std::int64_t a = c < 0 ? -c : c;
    out += std::to_string(a / unit_us);
    std::int64_t frac = a % unit_us;
    if (frac != 0) {
        std::string digits;
        for (std::int64_t u = unit_us / 10; u > 0; u /= 10) {
            digits += static_cast<char>('0' + frac / u);
            frac %= u;
        }
        while (!digits.empty() && digits.back() == '0') digits.pop_back();
        out += "." + digits;
    }
    return out;
}

inline Duration parse_duration(std::string_view s, std::int64_t unit_us, std::string_view key) {
    const double v = parse_double(s, key);
    const double us = v * static_cast<double>(unit_us);
    if (std::abs(us) > 9e15) throw ConfigError("duration out of range for " + std::string(key));
    return Duration{static_cast<Duration::rep>(std::llround(us))};
}

struct Field {
    std::string key;
    std::function<std::optional<std::string>(const Scenario&)> get;
    std::function<void(Scenario&, std::string_view)> set;
};

template <class T>
Field dbl(std::string key, T Scenario::*outer, double T::*member) {
    auto k = key;
    return {key, [=](const Scenario& s) -> std::optional<std::string> { return fmt_double(s.*outer.*member); },
            [=](Scenario& s, std::string_view v) { s.*outer.*member = parse_double(v, k); }};
}

template <class T, class Q>
Field qty(std::string key, T Scenario::*outer, Q T::*member) {
    auto k = key;
    return {key,
            [=](const Scenario& s) -> std::optional<std::string> { return fmt_double((s.*outer.*member).value); },
            [=](Scenario& s, std::string_view v) { s.*outer.*member = Q{parse_double(v, k)}; }};
}

template <class T>
Field integer(std::string key, T Scenario::*outer, int T::*member) {
    auto k = key;
    return {key, [=](const Scenario& s) -> std::optional<std::string> { return std::to_string(s.*outer.*member); },
            [=](Scenario& s, std::string_view v) { s.*outer.*member = parse_int(v, k); }};
}

template <class T>
Field dur(std::string key, T Scenario::*outer, Duration T::*member, std::int64_t unit_us) {
    auto k = key;
    return {key,
            [=](const Scenario& s) -> std::optional<std::string> { return fmt_duration(s.*outer.*member, unit_us); },
            [=](Scenario& s, std::string_view v) { s.*outer.*member = parse_duration(v, unit_us, k); }};
}

inline Field budget(std::string key, std::optional<double> CapacityConfig::*member) {
    auto k = key;
    return {key,
            [=](const Scenario& s) -> std::optional<std::string> {
                const auto& b = s.capacity.*member;
                if (!b) return std::nullopt;
                return fmt_double(*b);
            },
            [=](Scenario& s, std::string_view v) { s.capacity.*member = parse_double(v, k); }};
}

inline Field inactivity(std::string key, InactivityTimer TimerConfig::*member) {
    auto k = key;
    return {key,
            [=](const Scenario& s) -> std::optional<std::string> {
                const auto& t = s.timers.*member;
                return fmt_double(t.value) + (t.unit == InactivityTimer::Unit::Seconds ? "s" : "periods");
            },
            [=](Scenario& s, std::string_view v) {
                auto& t = s.timers.*member;
                if (v.ends_with("periods")) {
                    t = {parse_double(v.substr(0, v.size() - 7), k), InactivityTimer::Unit::NpdcchPeriods};
                } else if (v.ends_with("s")) {
                    t = {parse_double(v.substr(0, v.size() - 1), k), InactivityTimer::Unit::Seconds};
                } else {
                    throw ConfigError(k + " needs a unit suffix: 's' or 'periods'");
                }
            }};
}

inline const std::vector<Field>& fields() {
    using S = Scenario;
    static const std::vector<Field> f = [] {
        std::vector<Field> v;
        v.push_back({"procedure", [](const S& s) -> std::optional<std::string> { return std::string(to_string(s.procedure)); },
                     [](S& s, std::string_view x) { s.procedure = parse_procedure(x); }});
        v.push_back({"case", [](const S& s) -> std::optional<std::string> { return std::string(to_string(s.traffic_case)); },
                     [](S& s, std::string_view x) { s.traffic_case = parse_traffic_case(x); }});
        v.push_back({"coverage", [](const S& s) -> std::optional<std::string> { return std::string(to_string(s.coverage.name)); },
                     [](S& s, std::string_view x) { s.coverage = builtin_coverage_profile(x); }});
        v.push_back({"iat", [](const S& s) -> std::optional<std::string> { return fmt_duration(s.iat, 1000000); },
                     [](S& s, std::string_view x) { s.iat = parse_duration(x, 1000000, "iat"); }});
        v.push_back({"battery_wh", [](const S& s) -> std::optional<std::string> { return fmt_double(s.battery_wh); },
                     [](S& s, std::string_view x) { s.battery_wh = parse_double(x, "battery_wh"); }});
        v.push_back({"mt_reachability",
                     [](const S& s) -> std::optional<std::string> { return std::string(to_string(s.mt_reachability)); },
                     [](S& s, std::string_view x) { s.mt_reachability = parse_mt_reachability(x); }});
        v.push_back({"sync_ms", [](const S& s) -> std::optional<std::string> { return fmt_duration(s.sync_time, 1000); },
                     [](S& s, std::string_view x) { s.sync_time = parse_duration(x, 1000, "sync_ms"); }});
        v.push_back({"psm_only", [](const S& s) -> std::optional<std::string> { return s.psm_only ? "true" : "false"; },
                     [](S& s, std::string_view x) { s.psm_only = parse_bool(x, "psm_only"); }});

        v.push_back(integer("traffic.payload_bytes", &S::traffic, &TrafficModel::data_payload_bytes));
        v.push_back(integer("traffic.overhead_bytes", &S::traffic, &TrafficModel::protocol_overhead_bytes));
        v.push_back(integer("traffic.ack_payload_bytes", &S::traffic, &TrafficModel::ack_payload_bytes));

        v.push_back(qty("coverage.mcl_db", &S::coverage, &CoverageProfile::target_mcl_db));
        v.push_back(dbl("coverage.subcarrier_spacing_khz", &S::coverage, &CoverageProfile::subcarrier_spacing_khz));
        v.push_back(integer("coverage.ul_subcarriers", &S::coverage, &CoverageProfile::ul_subcarriers_per_burst));
        v.push_back({"coverage.modulation",
                     [](const S& s) -> std::optional<std::string> { return std::string(to_string(s.coverage.modulation)); },
                     [](S& s, std::string_view x) { s.coverage.modulation = parse_modulation(x); }});
        v.push_back(integer("coverage.mcs", &S::coverage, &CoverageProfile::mcs_index));
        v.push_back(integer("coverage.dl_mcs", &S::coverage, &CoverageProfile::dl_mcs_index));
        v.push_back(integer("coverage.rep_npdcch", &S::coverage, &CoverageProfile::rep_npdcch));
        v.push_back(integer("coverage.rep_npdsch", &S::coverage, &CoverageProfile::rep_npdsch));
        v.push_back(integer("coverage.rep_npusch", &S::coverage, &CoverageProfile::rep_npusch));
        v.push_back(integer("coverage.rep_nprach", &S::coverage, &CoverageProfile::rep_nprach));
        v.push_back(integer("coverage.r_max", &S::coverage, &CoverageProfile::r_max));
        v.push_back(dbl("coverage.g_factor", &S::coverage, &CoverageProfile::g_factor));
        v.push_back(dbl("coverage.resource_share", &S::coverage, &CoverageProfile::resource_share));
        v.push_back(dur("coverage.nprach_preamble_ms", &S::coverage, &CoverageProfile::nprach_preamble_duration, 1000));
        v.push_back(integer("coverage.sync_scale", &S::coverage, &CoverageProfile::sync_scale));

        v.push_back(qty("power.deep_sleep_mw", &S::power, &PowerProfile::deep_sleep_mw));
        v.push_back(qty("power.inactive_mw", &S::power, &PowerProfile::inactive_mw));
        v.push_back(qty("power.rx_mw", &S::power, &PowerProfile::rx_mw));
        v.push_back(qty("power.tx_max_mw", &S::power, &PowerProfile::tx_max_mw));
        v.push_back(qty("power.p_cmax_dbm", &S::power, &PowerProfile::p_cmax_dbm));
        v.push_back(qty("power.p_o_npusch_dbm", &S::power, &PowerProfile::p_o_npusch_dbm));
        v.push_back(dbl("power.alpha", &S::power, &PowerProfile::alpha));
        v.push_back(qty("power.target_received_dbm", &S::power, &PowerProfile::initial_received_target_power_dbm));
        v.push_back(qty("power.delta_preamble_db", &S::power, &PowerProfile::delta_preamble_db));
        v.push_back(qty("power.ramping_step_db", &S::power, &PowerProfile::power_ramping_step_db));

        v.push_back(inactivity("timers.cp_inactivity", &TimerConfig::connected_inactivity_cp));
        v.push_back(inactivity("timers.inactivity", &TimerConfig::connected_inactivity_up_sr));
        v.push_back(dur("timers.active_timer_base_s", &S::timers, &TimerConfig::idle_active_timer_base, 1000000));
        v.push_back(integer("timers.active_timer_cycles", &S::timers, &TimerConfig::idle_active_timer_cycles));
        v.push_back(dur("timers.drx_long_cycle_base_s", &S::timers, &TimerConfig::drx_long_cycle_base, 1000000));
        v.push_back(dur("timers.psm_tau_period_s", &S::timers, &TimerConfig::psm_tau_period, 1000000));
        v.push_back({"timers.idle_on_duration",
                     [](const S& s) -> std::optional<std::string> {
                         return s.timers.idle_on_duration == IdleOnDuration::RMax ? "rmax" : "period";
                     },
                     [](S& s, std::string_view x) {
                         if (x == "rmax") s.timers.idle_on_duration = IdleOnDuration::RMax;
                         else if (x == "period") s.timers.idle_on_duration = IdleOnDuration::NpdcchPeriod;
                         else throw ConfigError("timers.idle_on_duration must be 'period' or 'rmax'");
                     }});

        v.push_back(integer("ra.attempt_cap", &S::ra, &RandomAccessConfig::attempt_cap));
        v.push_back(dur("ra.opportunity_ms", &S::ra, &RandomAccessConfig::opportunity_period, 1000));
        v.push_back(dur("ra.rar_gap_ms", &S::ra, &RandomAccessConfig::rar_gap, 1000));

        v.push_back(dbl("capacity.dl_subframes_per_s", &S::capacity, &CapacityConfig::dl_subframes_per_s));
        v.push_back(dbl("capacity.dl_availability", &S::capacity, &CapacityConfig::dl_signal_availability));
        v.push_back(dbl("capacity.inband_factor", &S::capacity, &CapacityConfig::inband_control_factor));
        v.push_back(dbl("capacity.ul_units_per_s", &S::capacity, &CapacityConfig::ul_subcarrier_ms_per_s));
        v.push_back(integer("capacity.nprach_preambles", &S::capacity, &CapacityConfig::nprach_preambles_per_opportunity));
        v.push_back(dur("capacity.iat", &S::capacity, &CapacityConfig::capacity_iat, 1000000));
        v.push_back(budget("capacity.budget.NPDCCH", &CapacityConfig::budget_npdcch));
        v.push_back(budget("capacity.budget.NPDSCH", &CapacityConfig::budget_npdsch));
        v.push_back(budget("capacity.budget.NPUSCH", &CapacityConfig::budget_npusch));
        v.push_back(budget("capacity.budget.NPRACH", &CapacityConfig::budget_nprach));
        return v;
    }();
    return f;
}

}  // namespace io

// Applies key=value pairs on top of `base` (defaults when omitted).
inline Scenario parse_scenario(std::string_view text, Scenario base = {}) {
    std::vector<std::pair<std::string, std::string>> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        for (std::string tok; ls >> tok;) {
            auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + tok + "'");
            kv.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
        }
    }
    const auto& fields = io::fields();
    auto find = [&](const std::string& key) -> const io::Field& {
        for (const auto& f : fields) {
            if (f.key == key) return f;
        }
        throw ConfigError("unknown scenario key '" + key + "'");
    };
    // The profile name replaces the whole profile, so it goes first.
    for (const auto& [k, v] : kv) {
        if (k == "coverage") find(k).set(base, v);
    }
    for (const auto& [k, v] : kv) {
        if (k != "coverage") find(k).set(base, v);
    }
    return base;
}

inline std::string serialize_scenario(const Scenario& s) {
    std::string out;
    for (const auto& f : io::fields()) {
        if (auto v = f.get(s)) out += f.key + "=" + *v + "\n";
    }
    return out;
}

inline Scenario load_scenario(const std::string& path, Scenario base = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), std::move(base));
}

}  // namespace nbiot
