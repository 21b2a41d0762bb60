// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "nbiot/report.hpp"

using namespace nbiot;

namespace {

int failures = 0;

void check(const std::string& id, const std::string& what, bool ok, const std::string& value) {
    std::cout << (ok ? "PASS " : "FAIL ") << id << " " << what << " | " << value << "\n";
    if (!ok) ++failures;
}

std::string num(double v, int prec = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << v;
    return os.str();
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

Scenario point(Procedure p, TrafficCase c, CoverageLevel l, double iat_h) {
    Scenario s;
    s.procedure = p;
    s.traffic_case = c;
    s.coverage = builtin_coverage_profile(l);
    s.iat = from_s(iat_h * kSecondsPerHour);
    return s;
}

ValidatedScenario vpoint(Procedure p, TrafficCase c, CoverageLevel l, double iat_h) {
    return validate_scenario(point(p, c, l, iat_h));
}

double life(Procedure p, TrafficCase c, CoverageLevel l, double iat_h) {
    return battery_lifetime_years(vpoint(p, c, l, iat_h));
}

EnergyBreakdown breakdown(Procedure p, TrafficCase c, CoverageLevel l, double iat_h) {
    return cycle_energy(vpoint(p, c, l, iat_h));
}

double gain(Procedure p, TrafficCase c, CoverageLevel l) {
    return capacity_gain_pct(cell_capacity(vpoint(p, c, l, 1.0)), cell_capacity(vpoint(Procedure::SR, c, l, 1.0)));
}

std::string run_cli(const std::string& args) {
    const std::string cmd = std::string(NBIOT_SIM_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return "<popen failed>";
    std::string out;
    std::array<char, 4096> buf{};
    for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) out.append(buf.data(), n);
    if (pclose(p) != 0) out += "<nonzero exit>";
    return out;
}

// Recursive enumeration of the capped attempt process; shares nothing with
// the closed-form loop.
double attempts_oracle(int k, int cap, double reach) {
    const double p_detect = 1.0 - std::exp(-static_cast<double>(k));
    if (k == cap) return reach * k;
    return reach * p_detect * k + attempts_oracle(k + 1, cap, reach * (1.0 - p_detect));
}

void criterion_1() {
    Scenario s;
    s.psm_only = true;
    const double h = lifetime_hours(s.battery_wh, average_power_w(validate_scenario(s)));
    check("1", "PSM-only lifetime = 333333 h +-0.1%", std::abs(h / 333333.333 - 1.0) <= 1e-3, num(h, 1) + " h");
}

void criterion_2() {
    const double cp = gain(Procedure::CP, TrafficCase::UL, CoverageLevel::Normal);
    const double up = gain(Procedure::UP, TrafficCase::UL, CoverageLevel::Normal);
    check("2a", "CP UL Normal capacity gain in 162% +-25% rel", within(cp, 162 * 0.75, 162 * 1.25), num(cp, 1) + "%");
    check("2b", "UP UL Normal capacity gain in 120% +-25% rel", within(up, 120 * 0.75, 120 * 1.25), num(up, 1) + "%");
}

void criterion_3() {
    const auto rows = run_capacity_report(Scenario{});
    auto env = [&](Procedure p) {
        double lo = 1e300, hi = -1e300;
        for (const auto& r : rows) {
            if (r.procedure != p) continue;
            lo = std::min(lo, *r.report.gain_vs_sr_pct);
            hi = std::max(hi, *r.report.gain_vs_sr_pct);
        }
        return std::pair{lo, hi};
    };
    const auto [cplo, cphi] = env(Procedure::CP);
    const auto [uplo, uphi] = env(Procedure::UP);
    check("3a", "CP gain envelope min in 26 +-20%, max in 224 +-20%",
          within(cplo, 26 * 0.8, 26 * 1.2) && within(cphi, 224 * 0.8, 224 * 1.2),
          "min " + num(cplo, 1) + " max " + num(cphi, 1));
    check("3b", "UP gain envelope min in 36 +-20%, max in 165 +-20%",
          within(uplo, 36 * 0.8, 36 * 1.2) && within(uphi, 165 * 0.8, 165 * 1.2),
          "min " + num(uplo, 1) + " max " + num(uphi, 1));
}

void criterion_4() {
    double best = -1e300, at = 0;
    for (int h = 1; h <= 24; ++h) {
        const double imp =
            (life(Procedure::CP, TrafficCase::UL, CoverageLevel::Normal, h) /
                 life(Procedure::UP, TrafficCase::UL, CoverageLevel::Normal, h) -
             1.0) *
            100.0;
        if (imp > best) best = imp, at = h;
    }
    check("4", "max CP-vs-UP lifetime improvement (UL, Normal, 1-24 h) in [50%, 100%]", within(best, 50, 100),
          num(best, 1) + "% at " + num(at, 0) + " h");
}

void criterion_5() {
    const auto a = breakdown(Procedure::UP, TrafficCase::UL, CoverageLevel::Normal, 1.0);
    const double ra_drx = 100.0 * (a.share(a.ra_sync_mj) + a.share(a.drx_mj));
    check("5a", "UP UL Normal 1 h ra_sync+drx share 58% +-10pp", within(ra_drx, 48, 68), num(ra_drx, 1) + "%");

    const auto b = breakdown(Procedure::UP, TrafficCase::UL, CoverageLevel::Normal, 10.0);
    const double psm10 = 100.0 * b.share(b.psm_mj);
    check("5b", "UP UL Normal 10 h PSM share 84% +-10pp", within(psm10, 74, 94), num(psm10, 1) + "%");

    const auto r = breakdown(Procedure::UP, TrafficCase::UL, CoverageLevel::Robust, 10.0);
    const auto x = breakdown(Procedure::UP, TrafficCase::UL, CoverageLevel::Extreme, 10.0);
    const double pr = 100.0 * r.share(r.post_ra_messages_mj), px = 100.0 * x.share(x.post_ra_messages_mj);
    check("5c", "UP UL Robust 10 h post-RA message share 35% +-10pp", within(pr, 25, 45), num(pr, 1) + "%");
    check("5d", "UP UL Extreme 10 h post-RA message share 49% +-10pp", within(px, 39, 59), num(px, 1) + "%");

    const auto r24 = breakdown(Procedure::UP, TrafficCase::UL, CoverageLevel::Robust, 24.0);
    const auto x24 = breakdown(Procedure::UP, TrafficCase::UL, CoverageLevel::Extreme, 24.0);
    const double sr = 100.0 * r24.share(r24.psm_mj), sx = 100.0 * x24.share(x24.psm_mj);
    check("5e", "UP UL Robust 24 h PSM share 67% +-10pp", within(sr, 57, 77), num(sr, 1) + "%");
    check("5f", "UP UL Extreme 24 h PSM share 42% +-10pp", within(sx, 32, 52), num(sx, 1) + "%");
}

void criterion_6() {
    bool ok = true;
    std::string v;
    for (auto p : kProcedures) {
        for (auto l : kCoverageLevels) {
            const auto bn = cell_capacity(vpoint(p, TrafficCase::UL, l, 1.0)).bottleneck;
            ok &= (l == CoverageLevel::Normal) != is_downlink(bn);
            v += std::string(to_string(p)) + "/" + std::string(to_string(l)) + "=" + std::string(to_string(bn)) + " ";
        }
    }
    check("6", "UL bottleneck uplink at Normal, downlink at Robust and Extreme", ok, v);
}

void criterion_7() {
    for (auto l : {CoverageLevel::Robust, CoverageLevel::Extreme}) {
        for (auto c : {TrafficCase::DL, TrafficCase::DL_ACK}) {
            double best = -1e300;
            std::string at;
            for (auto p : kProcedures) {
                for (int h = 1; h <= 24; ++h) {
                    const double ul = life(p, TrafficCase::UL, l, h);
                    const double red = (1.0 - life(p, c, l, h) / ul) * 100.0;
                    if (red > best) best = red, at = std::string(to_string(p)) + " " + std::to_string(h) + " h";
                }
            }
            const bool dl = c == TrafficCase::DL;
            const double lo = dl ? 15 : 40, hi = dl ? 45 : 70;
            check(std::string("7") + (dl ? "a" : "b") + (l == CoverageLevel::Robust ? "R" : "E"),
                  std::string(to_string(l)) + " max lifetime reduction " + std::string(to_string(c)) + " vs UL in [" +
                      num(lo, 0) + "%, " + num(hi, 0) + "%]",
                  within(best, lo, hi), num(best, 1) + "% at " + at);
        }
    }
}

void criterion_8() {
    const double cp = life(Procedure::CP, TrafficCase::DL, CoverageLevel::Normal, 1.0);
    const double up = life(Procedure::UP, TrafficCase::DL, CoverageLevel::Normal, 1.0);
    const double d = std::abs(cp - up) / up * 100.0;
    check("8", "CP vs UP DL Normal lifetime difference < 10%", d < 10.0, num(d, 2) + "%");
}

// Exact property checks over the procedure x case x coverage x IAT grid.
void criterion_9() {
    std::vector<Scenario> grid;
    for (auto p : kProcedures)
        for (auto c : kTrafficCases)
            for (auto l : kCoverageLevels)
                for (int h = 1; h <= 24; ++h) grid.push_back(point(p, c, l, h));

    bool partition = true;
    for (const auto& s : grid) {
        const auto vs = validate_scenario(s);
        const Timeline tl = flow_timeline(build_flow(vs), vs);
        Duration t{0};
        for (const auto& i : tl.intervals()) {
            partition &= i.start == t && i.length > Duration{0};
            t = i.start + i.length;
        }
        partition &= t == s.iat;
    }
    check("9a", "timeline intervals partition [0, IAT) exactly", partition, std::to_string(grid.size()) + " points");

    bool linear = true;
    for (const auto& s : grid) {
        const auto e = cycle_energy(validate_scenario(s));
        Scenario t = s;
        t.power = s.power.scaled(2.0);
        const auto e2 = cycle_energy(validate_scenario(t));
        linear &= e2.total_mj.value == 2.0 * e.total_mj.value && e2.psm_mj.value == 2.0 * e.psm_mj.value &&
                  e2.drx_mj.value == 2.0 * e.drx_mj.value && e2.ra_sync_mj.value == 2.0 * e.ra_sync_mj.value;
    }
    check("9b", "energy scales exactly with power", linear, "k = 2");

    bool mono = true, order = true;
    for (auto p : kProcedures)
        for (auto c : kTrafficCases) {
            std::array<double, 3> prev{};
            for (int h = 1; h <= 24; ++h) {
                std::array<double, 3> y{};
                for (std::size_t i = 0; i < 3; ++i) y[i] = life(p, c, kCoverageLevels[i], h);
                for (std::size_t i = 0; i < 3; ++i) mono &= y[i] >= prev[i];
                order &= y[0] >= y[1] && y[1] >= y[2];
                prev = y;
            }
        }
    check("9c", "lifetime monotone non-decreasing in IAT", mono, "1-24 h");
    check("9d", "lifetime ordering Normal >= Robust >= Extreme", order, "all procedures and cases");

    bool idle = true;
    for (auto l : kCoverageLevels)
        for (int h = 1; h <= 24; ++h) idle &= breakdown(Procedure::CP, TrafficCase::UL, l, h).drx_idle_mj.value == 0.0;
    check("9e", "CP UL idle DRX energy is zero", idle, "");

    bool invariant = true;
    {
        const auto base = run_capacity_report(Scenario{});
        Scenario s;
        const auto b = channel_budgets(s.capacity, s.ra);
        auto at = [&](ChannelKind ch) { return b[static_cast<std::size_t>(ch)].available_units_per_s * 4.0; };
        s.capacity.budget_npdcch = at(ChannelKind::NPDCCH);
        s.capacity.budget_npdsch = at(ChannelKind::NPDSCH);
        s.capacity.budget_npusch = at(ChannelKind::NPUSCH);
        s.capacity.budget_nprach = at(ChannelKind::NPRACH);
        const auto scaled = run_capacity_report(s);
        for (std::size_t i = 0; i < base.size(); ++i)
            invariant &= *scaled[i].report.gain_vs_sr_pct == *base[i].report.gain_vs_sr_pct;
    }
    check("9f", "capacity gains invariant under budget scaling", invariant, "k = 4");

    double worst = 0.0;
    for (const auto& s : grid) {
        if (s.iat > from_s(3 * kSecondsPerHour)) continue;
        const auto vs = validate_scenario(s);
        const Timeline tl = flow_timeline(build_flow(vs), vs);
        const auto& iv = tl.intervals();
        double closed = 0.0, sampled = 0.0;
        for (const auto& i : iv) closed += i.power.value * to_ms(i.length) * 1e-3;
        std::size_t k = 0;
        for (std::int64_t ms = 0; ms * 1000 < tl.end().count(); ++ms) {
            const Duration mid{ms * 1000 + 500};
            while (k + 1 < iv.size() && iv[k].start + iv[k].length <= mid) ++k;
            sampled += iv[k].power.value * 1e-3;
        }
        worst = std::max(worst, std::abs(sampled / closed - 1.0));
    }
    check("9g", "1 ms re-integration matches closed-form energy within 0.1%", worst <= 1e-3,
          "worst " + num(worst * 100.0, 4) + "%");

    const double e = expected_attempts(10), oracle = attempts_oracle(1, 10, 1.0);
    check("9h", "expected_attempts(10) = 1.4202 +-0.0005 and matches oracle",
          std::abs(e - 1.4202) <= 5e-4 && std::abs(e - oracle) <= 1e-12, num(e, 6) + " vs " + num(oracle, 6));

    bool cap = true;
    std::string pw;
    for (auto l : kCoverageLevels) {
        const auto c = builtin_coverage_profile(l);
        const auto d = npusch_tx_power_dbm(c, PowerProfile{}, c.target_mcl_db);
        cap &= d.value == 23.0;
        pw += num(d.value, 2) + " ";
    }
    check("9i", "power control at each profile's MCL returns exactly 23 dBm", cap, pw + "dBm");

    const std::string a1 = run_cli("capacity"), a2 = run_cli("capacity");
    const std::string b1 = run_cli("lifetime --case UL --sweep iat"), b2 = run_cli("lifetime --case UL --sweep iat");
    check("9j", "CLI output byte-identical across runs",
          a1 == a2 && b1 == b2 && a1.find("<nonzero") == std::string::npos && !b1.empty(),
          std::to_string(a1.size() + b1.size()) + " bytes");
}

void criterion_10() {
    double worst = 1e300;
    std::string at;
    for (auto p : {Procedure::CP, Procedure::UP})
        for (auto l : {CoverageLevel::Normal, CoverageLevel::Robust})
            for (int h = 2; h <= 24; ++h) {
                const double y = life(p, TrafficCase::UL, l, h);
                if (y < worst) worst = y, at = std::string(to_string(p)) + " " + std::string(to_string(l)) + " " +
                                           std::to_string(h) + " h";
            }
    check("10a", "CP/UP UL Normal/Robust lifetime > 2 y for IAT >= 2 h", worst > 2.0,
          "min " + num(worst, 2) + " y at " + at);
    const double cp24 = life(Procedure::CP, TrafficCase::UL, CoverageLevel::Normal, 24.0);
    check("10b", "CP UL Normal 24 h lifetime in [6, 10] y", within(cp24, 6.0, 10.0), num(cp24, 2) + " y");
}

}  // namespace

int main() {
    const std::array<std::function<void()>, 10> all{criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                                    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
    for (const auto& c : all) {
        try {
            c();
        } catch (const std::exception& e) {
            check("?", "criterion raised", false, e.what());
        }
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
