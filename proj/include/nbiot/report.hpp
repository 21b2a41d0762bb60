#pragma once

// Parameter sweeps, the capacity grid, and deterministic table output.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "nbiot/capacity.hpp"
#include "nbiot/energy.hpp"
#include "nbiot/scenario_io.hpp"

namespace nbiot {

// Runs fn(i) for i in [0, n) on a few worker threads. Results land in slot i,
// so the output order never depends on completion order.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(n);
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) out[i] = fn(i);
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return out;
}

// ---------------------------------------------------------------------------
// Tables

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

enum class OutputFormat { Csv, PlotData };

inline OutputFormat parse_output_format(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "plot-data") return OutputFormat::PlotData;
    throw ConfigError("unknown format '" + std::string(s) + "' (csv or plot-data)");
}

inline std::string fixed6(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// csv: RFC 4180 style. plot-data: a '#'-prefixed header line, then
// whitespace-separated columns (gnuplot, numpy.loadtxt, pandas delim_whitespace).
inline void emit(const Table& t, OutputFormat fmt, std::ostream& os) {
    if (fmt == OutputFormat::Csv) {
        for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << csv_cell(t.header[i]);
        os << "\n";
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
            os << "\n";
        }
        return;
    }
    os << "#";
    for (const auto& h : t.header) os << " " << h;
    os << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::string cell = r[i].empty() ? "-" : r[i];
            std::replace(cell.begin(), cell.end(), ' ', '_');
            os << (i ? " " : "") << cell;
        }
        os << "\n";
    }
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { Iat, Coverage, Procedure, Case };

inline SweepAxis parse_sweep_axis(std::string_view s) {
    if (s == "iat") return SweepAxis::Iat;
    if (s == "coverage") return SweepAxis::Coverage;
    if (s == "procedure") return SweepAxis::Procedure;
    if (s == "case") return SweepAxis::Case;
    throw ConfigError("unknown sweep axis '" + std::string(s) + "'");
}

struct SweepDimension {
    SweepAxis axis{SweepAxis::Iat};
    std::vector<std::string> values;
};

// Cartesian product of the dimensions, first dimension outermost, applied on
// top of `fixed`.
struct SweepSpec {
    std::vector<SweepDimension> dimensions;
    Scenario fixed;
};

inline std::vector<std::string> default_axis_values(SweepAxis a) {
    std::vector<std::string> v;
    switch (a) {
        case SweepAxis::Iat:
            for (int h = 1; h <= 24; ++h) v.push_back(std::to_string(h * 3600));
            break;
        case SweepAxis::Coverage:
            for (auto c : kCoverageLevels) v.emplace_back(to_string(c));
            break;
        case SweepAxis::Procedure:
            for (auto p : kProcedures) v.emplace_back(to_string(p));
            break;
        case SweepAxis::Case:
            for (auto c : kTrafficCases) v.emplace_back(to_string(c));
            break;
    }
    return v;
}

inline void apply_axis(Scenario& s, SweepAxis a, const std::string& v) {
    switch (a) {
        case SweepAxis::Iat: s.iat = io::parse_duration(v, 1000000, "iat"); break;
        case SweepAxis::Coverage: s.coverage = builtin_coverage_profile(v); break;
        case SweepAxis::Procedure: s.procedure = parse_procedure(v); break;
        case SweepAxis::Case: s.traffic_case = parse_traffic_case(v); break;
    }
}

// "iat=3600,7200" or a bare axis name for its default values.
inline SweepDimension parse_sweep(std::string_view text) {
    SweepDimension d;
    const auto eq = text.find('=');
    d.axis = parse_sweep_axis(text.substr(0, eq));
    if (eq == std::string_view::npos) {
        d.values = default_axis_values(d.axis);
        return d;
    }
    std::string_view rest = text.substr(eq + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        d.values.emplace_back(rest.substr(0, comma));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return d;
}

inline void validate_sweep(const SweepSpec& spec) {
    std::vector<ValidationIssue> issues;
    for (const auto& d : spec.dimensions) {
        if (d.values.empty() || std::any_of(d.values.begin(), d.values.end(), [](auto& v) { return v.empty(); })) {
            issues.push_back({"sweep", "values must be non-empty"});
            continue;
        }
        Scenario probe;
        for (const auto& v : d.values) apply_axis(probe, d.axis, v);  // throws on bad names
        if (d.axis == SweepAxis::Iat) {
            for (std::size_t i = 1; i < d.values.size(); ++i) {
                if (!(io::parse_double(d.values[i], "iat") > io::parse_double(d.values[i - 1], "iat"))) {
                    issues.push_back({"sweep.iat", "values must be strictly increasing"});
                    break;
                }
            }
        } else {
            auto sorted = d.values;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                issues.push_back({"sweep", "values must be distinct"});
            }
        }
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

inline std::vector<Scenario> expand_sweep(const SweepSpec& spec) {
    std::vector<Scenario> points{spec.fixed};
    for (const auto& d : spec.dimensions) {
        std::vector<Scenario> next;
        for (const auto& base : points) {
            for (const auto& v : d.values) {
                Scenario s = base;
                apply_axis(s, d.axis, v);
                next.push_back(std::move(s));
            }
        }
        points = std::move(next);
    }
    return points;
}

struct LifetimeRow {
    std::string procedure;
    std::string traffic_case;
    std::string coverage;
    double iat_s{0.0};
    double lifetime_years{0.0};
    double avg_power_w{0.0};
    EnergyBreakdown breakdown;
    std::string error;
};

inline const std::vector<std::string>& lifetime_header() {
    static const std::vector<std::string> h{"procedure",      "case",         "coverage",
                                            "iat_s",          "lifetime_years", "avg_power_uw",
                                            "ra_sync_share",  "post_ra_messages_share",
                                            "drx_share",      "psm_share",    "status"};
    return h;
}

inline LifetimeRow evaluate_lifetime(const Scenario& s, const MessageCatalog& cat) {
    LifetimeRow r;
    r.procedure = s.psm_only ? "PSM" : std::string(to_string(s.procedure));
    r.traffic_case = s.psm_only ? "-" : std::string(to_string(s.traffic_case));
    r.coverage = s.psm_only ? "-" : std::string(to_string(s.coverage.name));
    r.iat_s = to_s(s.iat);
    try {
        const ValidatedScenario vs = validate_scenario(s);
        r.breakdown = cycle_energy(vs, cat);
        r.avg_power_w = average_power_w(r.breakdown, vs->iat);
        r.lifetime_years = battery_lifetime_years(vs->battery_wh, r.avg_power_w);
    } catch (const ValidationError& e) {
        r.error = e.what();
    } catch (const DomainError& e) {
        r.error = e.what();
    }
    return r;
}

struct LifetimeSweepResult {
    std::vector<LifetimeRow> rows;
    bool any_invalid() const {
        return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return !r.error.empty(); });
    }
};

// One row per sweep point, followed by a traffic-free PSM baseline row for
// each distinct IAT.
inline LifetimeSweepResult run_lifetime_sweep(const SweepSpec& spec, const MessageCatalog& cat = builtin_catalog()) {
    validate_sweep(spec);
    std::vector<Scenario> points = expand_sweep(spec);
    std::vector<Duration> iats;
    for (const auto& p : points) {
        if (std::find(iats.begin(), iats.end(), p.iat) == iats.end()) iats.push_back(p.iat);
    }
    for (auto iat : iats) {
        Scenario b = spec.fixed;
        b.iat = iat;
        b.psm_only = true;
        points.push_back(b);
    }
    LifetimeSweepResult out;
    out.rows = parallel_map<LifetimeRow>(points.size(),
                                         [&](std::size_t i) { return evaluate_lifetime(points[i], cat); });
    return out;
}

inline Table lifetime_table(const LifetimeSweepResult& r) {
    Table t{lifetime_header(), {}};
    for (const auto& row : r.rows) {
        const bool ok = row.error.empty();
        const auto& b = row.breakdown;
        auto num = [&](double v) { return ok ? fixed6(v) : std::string("nan"); };
        t.rows.push_back({row.procedure, row.traffic_case, row.coverage, fixed6(row.iat_s), num(row.lifetime_years),
                          num(row.avg_power_w * 1e6), num(b.share(b.ra_sync_mj)), num(b.share(b.post_ra_messages_mj)),
                          num(b.share(b.drx_mj)), num(b.share(b.psm_mj)), ok ? "ok" : row.error});
    }
    return t;
}

// ---------------------------------------------------------------------------
// Capacity grid

struct CapacityRow {
    Procedure procedure{Procedure::CP};
    TrafficCase traffic_case{TrafficCase::UL};
    CoverageLevel coverage{CoverageLevel::Normal};
    CapacityReport report;
    CapacityReport sr;
};

inline const std::vector<std::string>& capacity_header() {
    static const std::vector<std::string> h{
        "procedure",      "case",           "coverage",     "reports_per_hour", "bottleneck",
        "sr_reports_per_hour", "sr_bottleneck", "gain_vs_sr_pct", "usage_npdcch", "usage_npdsch",
        "usage_npusch",   "usage_nprach"};
    return h;
}

struct CapacityFilter {
    std::vector<TrafficCase> cases{kTrafficCases.begin(), kTrafficCases.end()};
    std::vector<CoverageLevel> coverages{kCoverageLevels.begin(), kCoverageLevels.end()};
};

// (CP, UP) x cases x coverages, each against SR at the same point. The
// capacity IAT from the scenario is used (1 h by default); `base` supplies
// every other parameter. Coverage-specific fields come from the builtin
// profile of each grid point.
inline std::vector<CapacityRow> run_capacity_report(const Scenario& base, const MessageCatalog& cat = builtin_catalog(),
                                                    const CapacityFilter& filter = {}) {
    struct Point {
        TrafficCase c;
        CoverageLevel l;
    };
    std::vector<Point> pts;
    for (auto l : filter.coverages) {
        for (auto c : filter.cases) pts.push_back({c, l});
    }
    auto at = [&](Procedure p, const Point& pt) {
        Scenario s = base;
        s.procedure = p;
        s.traffic_case = pt.c;
        if (s.coverage.name != pt.l) s.coverage = builtin_coverage_profile(pt.l);
        s.iat = s.capacity.capacity_iat;
        s.psm_only = false;
        return cell_capacity(validate_scenario(s), cat);
    };
    auto rows = parallel_map<std::vector<CapacityRow>>(pts.size(), [&](std::size_t i) {
        const CapacityReport sr = at(Procedure::SR, pts[i]);
        std::vector<CapacityRow> out;
        for (auto p : {Procedure::CP, Procedure::UP}) {
            CapacityRow r{p, pts[i].c, pts[i].l, at(p, pts[i]), sr};
            r.report.gain_vs_sr_pct = capacity_gain_pct(r.report, sr);
            out.push_back(std::move(r));
        }
        return out;
    });
    std::vector<CapacityRow> flat;
    // Procedure-major to match the figure layout.
    for (auto p : {Procedure::CP, Procedure::UP}) {
        for (const auto& group : rows) {
            for (const auto& r : group) {
                if (r.procedure == p) flat.push_back(r);
            }
        }
    }
    return flat;
}

inline Table capacity_table(const std::vector<CapacityRow>& rows) {
    Table t{capacity_header(), {}};
    for (const auto& r : rows) {
        const auto& u = r.report.per_channel_usage;
        t.rows.push_back({std::string(to_string(r.procedure)), std::string(to_string(r.traffic_case)),
                          std::string(to_string(r.coverage)), fixed6(r.report.reports_per_hour),
                          std::string(to_string(r.report.bottleneck)), fixed6(r.sr.reports_per_hour),
                          std::string(to_string(r.sr.bottleneck)), fixed6(r.report.gain_vs_sr_pct.value_or(0.0)),
                          fixed6(u[ChannelKind::NPDCCH]), fixed6(u[ChannelKind::NPDSCH]),
                          fixed6(u[ChannelKind::NPUSCH]), fixed6(u[ChannelKind::NPRACH])});
    }
    return t;
}

}  // namespace nbiot
