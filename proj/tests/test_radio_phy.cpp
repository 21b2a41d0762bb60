#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace nbiot;

namespace {
const CoverageProfile kNormal = builtin_coverage_profile(CoverageLevel::Normal);
const CoverageProfile kRobust = builtin_coverage_profile(CoverageLevel::Robust);
const CoverageProfile kExtreme = builtin_coverage_profile(CoverageLevel::Extreme);
}  // namespace

TEST(NpdcchPeriod, PerProfile) {
    EXPECT_EQ(npdcch_period(kNormal), from_ms(32.0));
    EXPECT_EQ(npdcch_period(kRobust), from_ms(96.0));
    EXPECT_EQ(npdcch_period(kExtreme), from_ms(768.0));
}

TEST(NpdcchPeriod, HoldsOneRepeatedDci) {
    for (auto l : kCoverageLevels) {
        const auto c = builtin_coverage_profile(l);
        EXPECT_GE(npdcch_period(c), from_ms(1.0) * c.rep_npdcch);
    }
}

// Entries checked by hand against the standard's NPUSCH/NPDSCH TBS tables.
TEST(Tbs, SpotEntries) {
    const auto& ul = npusch_tbs_table();
    const auto& dl = npdsch_tbs_table();
    EXPECT_EQ(ul.at(0, 1), 16);
    EXPECT_EQ(ul.at(9, 4), 616);
    EXPECT_EQ(ul.at(12, 4), 1000);
    EXPECT_EQ(ul.at(6, 10), 1000);
    EXPECT_EQ(ul.at(3, 8), 440);
    EXPECT_EQ(ul.at(0, 10), 256);
    EXPECT_EQ(dl.at(12, 3), 680);
    EXPECT_EQ(dl.at(4, 10), 680);
    EXPECT_EQ(dl.at(2, 10), 424);
    EXPECT_EQ(dl.at(9, 4), 616);
    EXPECT_FALSE(ul.at(12, 5).has_value());
    EXPECT_FALSE(dl.at(9, 5).has_value());
}

TEST(Tbs, SmallestEntryForLowestMcs) {
    EXPECT_EQ(tbs_bits(kExtreme, Direction::UL, 1), 16);
}

TEST(Tbs, OutOfRangeIsError) {
    EXPECT_THROW(tbs_bits(kNormal, Direction::UL, 7), DomainError);
    EXPECT_THROW(tbs_bits(kNormal, Direction::UL, 12), DomainError);
    EXPECT_THROW(tbs_bits(kNormal, Direction::DL, 5), DomainError);  // undefined cell of row 9
}

TEST(Tbs, MonotoneInUnits) {
    for (const auto* table : {&npusch_tbs_table(), &npdsch_tbs_table()}) {
        for (int r = 0; r < table->row_count(); ++r) {
            int prev = 0;
            for (int n : table->columns()) {
                if (auto v = table->at(r, n)) {
                    EXPECT_GE(*v, prev);
                    prev = *v;
                }
            }
        }
    }
}

TEST(Tbs, SingleToneRemap) {
    auto c = kExtreme;
    c.mcs_index = 1;
    EXPECT_EQ(npusch_itbs(c), 2);
    c.mcs_index = 2;
    EXPECT_EQ(npusch_itbs(c), 1);
    EXPECT_EQ(npusch_itbs(kNormal), 9);
}

TEST(Airtime, Npusch64BytesNormalMatchesTableSearch) {
    // Independent search: smallest column whose TBS holds 512 bits.
    int n_min = -1;
    for (int n : npusch_tbs_table().columns()) {
        auto v = npusch_tbs_table().at(9, n);
        if (v && *v >= 512) {
            n_min = n;
            break;
        }
    }
    ASSERT_EQ(n_min, 4);
    const Airtime a = message_airtime(64, kNormal, ChannelKind::NPUSCH);
    EXPECT_EQ(a.duration, from_ms(1.0) * n_min * 2);
    EXPECT_EQ(a.transport_blocks, 1);
    EXPECT_DOUBLE_EQ(a.ul_subcarrier_fraction, 1.0);
}

TEST(Airtime, Npusch64BytesRobustAndExtreme) {
    // Robust: 512 bits at I_TBS 3 need 10 RU (8 RU hold only 440) of 4 ms, 16 repetitions.
    EXPECT_EQ(message_airtime(64, kRobust, ChannelKind::NPUSCH).duration, from_ms(640.0));
    // Extreme: 256-bit row maximum, so two 10-RU blocks of 32 ms each.
    const Airtime x = message_airtime(64, kExtreme, ChannelKind::NPUSCH);
    EXPECT_EQ(x.transport_blocks, 2);
    EXPECT_EQ(x.duration, from_ms(640.0));
    EXPECT_DOUBLE_EQ(x.ul_subcarrier_fraction, 0.25 / 12.0);
    EXPECT_GT(message_airtime(64, kRobust, ChannelKind::NPUSCH).duration,
              message_airtime(64, kNormal, ChannelKind::NPUSCH).duration);
}

TEST(Airtime, NarrowToneSlotIsFourTimesLonger) {
    auto wide = kExtreme;
    wide.subcarrier_spacing_khz = 15.0;
    EXPECT_EQ(resource_unit_duration(kExtreme), resource_unit_duration(wide) * 4);
}

TEST(Airtime, NpdcchGrantExtreme) {
    EXPECT_EQ(message_airtime(0, kExtreme, ChannelKind::NPDCCH).duration, from_ms(512.0));
}

TEST(Airtime, NpdschUsesDownlinkMcs) {
    // 25 bytes = 200 bits; DL I_TBS 9 holds 296 in 2 subframes.
    EXPECT_EQ(message_airtime(25, kNormal, ChannelKind::NPDSCH).duration, from_ms(2.0));
    // Robust DL I_TBS 3: 208 bits in 4 subframes, 32 repetitions.
    EXPECT_EQ(message_airtime(25, kRobust, ChannelKind::NPDSCH).duration, from_ms(128.0));
}

TEST(Airtime, ZeroSizedSharedChannelMessageIsError) {
    EXPECT_THROW(message_airtime(0, kNormal, ChannelKind::NPUSCH), DomainError);
    EXPECT_THROW(message_airtime(0, kNormal, ChannelKind::NPDSCH), DomainError);
}

TEST(Airtime, PreambleIsSizeIndependent) {
    EXPECT_EQ(message_airtime(0, kRobust, ChannelKind::NPRACH).duration, from_ms(6.4 * 8));
    EXPECT_EQ(message_airtime(500, kRobust, ChannelKind::NPRACH).duration, from_ms(6.4 * 8));
}

// Property: on-air time never shrinks with more bytes or more repetitions.
TEST(Airtime, MonotoneInSizeAndRepetitions) {
    for (auto l : kCoverageLevels) {
        const auto c = builtin_coverage_profile(l);
        for (auto ch : {ChannelKind::NPUSCH, ChannelKind::NPDSCH}) {
            Duration prev{};
            for (int b = 1; b <= 1500; ++b) {
                const auto d = message_airtime(b, c, ch).duration;
                ASSERT_GE(d, prev) << to_string(l) << " " << b;
                prev = d;
            }
        }
        for (int bytes : {1, 64, 300}) {
            auto more = c;
            more.rep_npusch *= 2;
            more.rep_npdsch *= 2;
            more.rep_npdcch *= 2;
            more.rep_nprach *= 2;
            for (auto ch : kChannelOrder) {
                const int sz = (ch == ChannelKind::NPUSCH || ch == ChannelKind::NPDSCH) ? bytes : 0;
                EXPECT_GE(message_airtime(sz, more, ch).duration, message_airtime(sz, c, ch).duration);
            }
        }
    }
}

TEST(ScheduleGap, SharedChannelsOnly) {
    EXPECT_DOUBLE_EQ(schedule_gap_ms(ChannelKind::NPUSCH), 8.0);
    EXPECT_DOUBLE_EQ(schedule_gap_ms(ChannelKind::NPDSCH), 4.0);
    EXPECT_THROW(schedule_gap_ms(ChannelKind::NPRACH), DomainError);
    EXPECT_THROW(schedule_gap_ms(ChannelKind::NPDCCH), DomainError);
}

TEST(PowerControl, NpuschNormalIsCapped) {
    const PowerProfile p;
    // Open loop 10 log10(12) - 100 + 144 = 54.8 dBm.
    EXPECT_DOUBLE_EQ(npusch_tx_power_dbm(kNormal, p, Decibel{144.0}).value, 23.0);
}

TEST(PowerControl, NpuschSingleToneLowPathloss) {
    auto c = kNormal;
    c.ul_subcarriers_per_burst = 1;
    EXPECT_NEAR(npusch_tx_power_dbm(c, PowerProfile{}, Decibel{80.0}).value, -20.0, 1e-12);
}

TEST(PowerControl, ManyRepetitionsUseMaxPower) {
    for (double pl : {1.0, 60.0, 154.0}) {
        EXPECT_DOUBLE_EQ(npusch_tx_power_dbm(kRobust, PowerProfile{}, Decibel{pl}).value, 23.0);
    }
}

TEST(PowerControl, Nprach) {
    const PowerProfile p;
    EXPECT_DOUBLE_EQ(nprach_tx_power_dbm(p, Decibel{144.0}, 1).value, 23.0);
    EXPECT_DOUBLE_EQ(nprach_tx_power_dbm(p, Decibel{80.0}, 5).value, -20.0);
    EXPECT_DOUBLE_EQ(nprach_tx_power_dbm(p, Decibel{123.0}, 1).value, 23.0);
    EXPECT_THROW(nprach_tx_power_dbm(p, Decibel{80.0}, 0), DomainError);
    PowerProfile ramp = p;
    ramp.power_ramping_step_db = Decibel{2.0};
    EXPECT_DOUBLE_EQ(nprach_tx_power_dbm(ramp, Decibel{80.0}, 3).value, -16.0);
}

TEST(PowerControl, AllProfilesHitTheCap) {
    const PowerProfile p;
    for (auto l : kCoverageLevels) {
        const auto c = builtin_coverage_profile(l);
        EXPECT_EQ(npusch_tx_power_dbm(c, p, c.target_mcl_db).value, 23.0);
        EXPECT_EQ(nprach_tx_power_dbm(p, c.target_mcl_db, 1).value, 23.0);
    }
}

TEST(TxConsumption, LinearPa) {
    const PowerProfile p;
    EXPECT_DOUBLE_EQ(tx_power_consumption_mw(p, Dbm{23.0}).value, 545.0);
    EXPECT_NEAR(tx_power_consumption_mw(p, Dbm{-20.0}).value, 3.03, 0.005);
    EXPECT_NEAR(tx_power_consumption_mw(p, Dbm{-20.0}).value, 3.0 + 542.0 * 0.01 / dbm_to_mw(Dbm{23.0}).value,
                1e-12);
    const PowerProfile doubled = p.scaled(2.0);
    EXPECT_DOUBLE_EQ(tx_power_consumption_mw(doubled, doubled.p_cmax_dbm).value, 1090.0);
}
