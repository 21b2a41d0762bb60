#pragma once

// Message sizes to on-air time, and uplink transmit power.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "nbiot/model.hpp"
#include "nbiot/tbs_table.hpp"

namespace nbiot {

struct Airtime {
    Duration duration{};
    ChannelKind channel{ChannelKind::NPDSCH};
    // Share of the 12 x 15 kHz carrier occupied; 1.0 on the downlink.
    double ul_subcarrier_fraction{1.0};
    int transport_blocks{0};

    double duration_ms() const { return to_ms(duration); }
    // Resource units charged against the channel budget: subframes on the
    // downlink, subcarrier-milliseconds on NPUSCH.
    double resource_units() const {
        if (channel == ChannelKind::NPUSCH) return duration_ms() * ul_subcarrier_fraction * 12.0;
        return duration_ms();
    }
};

// Single-tone NPUSCH remaps I_MCS before the TBS lookup.
inline int npusch_itbs(const CoverageProfile& c) {
    if (c.ul_subcarriers_per_burst > 1) return c.mcs_index;
    static constexpr int single_tone[] = {0, 2, 1, 3, 4, 5, 6, 7, 8, 9, 10};
    if (c.mcs_index < 0 || c.mcs_index > 10) {
        throw DomainError("single-tone NPUSCH MCS must be in [0, 10]");
    }
    return single_tone[c.mcs_index];
}

inline int max_mcs_index(const CoverageProfile& c, Direction d) {
    if (d == Direction::UL) return c.ul_subcarriers_per_burst > 1 ? npusch_tbs_table().row_count() - 1 : 10;
    return npdsch_tbs_table().row_count() - 1;
}

inline int tbs_bits(const CoverageProfile& c, Direction d, int resource_units) {
    const auto& table = d == Direction::UL ? npusch_tbs_table() : npdsch_tbs_table();
    const int itbs = d == Direction::UL ? npusch_itbs(c) : c.dl_mcs_index;
    if (itbs < 0 || itbs >= table.row_count()) throw DomainError("MCS index outside the TBS table");
    auto v = table.at(itbs, resource_units);
    if (!v) {
        throw DomainError("no TBS entry for I_TBS " + std::to_string(itbs) + " with " +
                          std::to_string(resource_units) + " units");
    }
    return *v;
}

// Duration of one NPUSCH resource unit.
inline Duration resource_unit_duration(const CoverageProfile& c) {
    if (c.subcarrier_spacing_khz == 3.75) return from_ms(32.0);
    switch (c.ul_subcarriers_per_burst) {
        case 12: return from_ms(1.0);
        case 6: return from_ms(2.0);
        case 3: return from_ms(4.0);
        case 1: return from_ms(8.0);
        default: throw DomainError("unsupported NPUSCH subcarrier allocation");
    }
}

// Splits a PDU into transport blocks no larger than the row maximum and
// returns the allocation size of each.
inline std::vector<int> segment_units(const TbsTable& table, int itbs, int bits) {
    if (itbs < 0 || itbs >= table.row_count()) throw DomainError("MCS index outside the TBS table");
    const auto [max_bits, max_units] = table.row_max(itbs);
    std::vector<int> units;
    while (bits > 0) {
        const int chunk = std::min(bits, max_bits);
        units.push_back(chunk == max_bits ? max_units : *table.min_units_for(itbs, chunk));
        bits -= chunk;
    }
    return units;
}

inline Airtime message_airtime(int size_bytes, const CoverageProfile& c, ChannelKind ch) {
    Airtime a;
    a.channel = ch;
    switch (ch) {
        case ChannelKind::NPDCCH:
            // One full subframe per repetition of the DCI.
            a.duration = from_ms(1.0) * c.rep_npdcch;
            a.transport_blocks = 0;
            return a;
        case ChannelKind::NPRACH:
            a.duration = c.nprach_preamble_duration * c.rep_nprach;
            a.ul_subcarrier_fraction = (3.75 / 15.0) / 12.0;
            return a;
        case ChannelKind::NPUSCH: {
            if (size_bytes <= 0) throw DomainError("NPUSCH message must carry at least one byte");
            auto units = segment_units(npusch_tbs_table(), npusch_itbs(c), size_bytes * 8);
            const int total = std::accumulate(units.begin(), units.end(), 0);
            a.duration = resource_unit_duration(c) * total * c.rep_npusch;
            a.ul_subcarrier_fraction =
                c.ul_subcarriers_per_burst * (c.subcarrier_spacing_khz / 15.0) / 12.0;
            a.transport_blocks = static_cast<int>(units.size());
            return a;
        }
        case ChannelKind::NPDSCH: {
            if (size_bytes <= 0) throw DomainError("NPDSCH message must carry at least one byte");
            auto units = segment_units(npdsch_tbs_table(), c.dl_mcs_index, size_bytes * 8);
            const int total = std::accumulate(units.begin(), units.end(), 0);
            a.duration = from_ms(1.0) * total * c.rep_npdsch;
            a.transport_blocks = static_cast<int>(units.size());
            return a;
        }
    }
    throw DomainError("unknown channel");
}

// Delay from the end of the scheduling DCI to the start of the shared-channel burst.
inline Duration schedule_gap(ChannelKind ch) {
    switch (ch) {
        case ChannelKind::NPUSCH: return from_ms(8.0);
        case ChannelKind::NPDSCH: return from_ms(4.0);
        default: throw DomainError("no scheduling gap defined for " + std::string(to_string(ch)));
    }
}

inline double schedule_gap_ms(ChannelKind ch) { return to_ms(schedule_gap(ch)); }

inline Dbm npusch_tx_power_dbm(const CoverageProfile& c, const PowerProfile& p, Decibel pathloss) {
    if (c.rep_npusch > 2) return p.p_cmax_dbm;
    // M counts occupied subcarriers; a 3.75 kHz tone is a quarter of a 15 kHz one.
    const double m = c.ul_subcarriers_per_burst * (c.subcarrier_spacing_khz / 15.0);
    const double open_loop = 10.0 * std::log10(m) + p.p_o_npusch_dbm.value + p.alpha * pathloss.value;
    return Dbm{std::min(p.p_cmax_dbm.value, open_loop)};
}

inline Dbm nprach_tx_power_dbm(const PowerProfile& p, Decibel pathloss, int attempt) {
    if (attempt < 1) throw DomainError("preamble attempt index starts at 1");
    const double target = p.initial_received_target_power_dbm.value + p.delta_preamble_db.value +
                          (attempt - 1) * p.power_ramping_step_db.value;
    return Dbm{std::min(p.p_cmax_dbm.value, target + pathloss.value)};
}

// Linear PA between the inactive floor and the full-power draw.
inline Milliwatt tx_power_consumption_mw(const PowerProfile& p, Dbm radiated) {
    if (radiated >= p.p_cmax_dbm) return p.tx_max_mw;
    const double ratio = dbm_to_mw(radiated).value / dbm_to_mw(p.p_cmax_dbm).value;
    return p.inactive_mw + (p.tx_max_mw - p.inactive_mw) * ratio;
}

}  // namespace nbiot
