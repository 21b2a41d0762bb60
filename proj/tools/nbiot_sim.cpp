// nbiot_sim: battery lifetime sweeps and the capacity-gain grid.
//
// Exit status: 0 ok, 1 invalid scenario or arguments, 2 I/O failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "nbiot/report.hpp"

namespace {

using namespace nbiot;

struct CommonOptions {
    std::string scenario_file;
    std::string catalog_file;
    std::string out_dir;
    std::string format = "csv";
    std::optional<std::string> coverage;
    std::optional<std::string> traffic_case;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--scenario", o.scenario_file, "key=value scenario file");
    cmd->add_option("--catalog", o.catalog_file, "message catalog replacing the builtin one");
    cmd->add_option("--out", o.out_dir, "output directory (default: stdout)");
    cmd->add_option("--format", o.format, "csv or plot-data")->check(CLI::IsMember({"csv", "plot-data"}));
    cmd->add_option("--coverage", o.coverage, "Normal, Robust or Extreme");
    cmd->add_option("--case", o.traffic_case, "UL, UL_ACK, DL or DL_ACK");
}

Scenario base_scenario(const CommonOptions& o) {
    return o.scenario_file.empty() ? Scenario{} : load_scenario(o.scenario_file);
}

MessageCatalog catalog(const CommonOptions& o) {
    return o.catalog_file.empty() ? builtin_catalog() : MessageCatalog::load(o.catalog_file);
}

void write_table(const Table& t, const CommonOptions& o, const std::string& stem) {
    const OutputFormat fmt = parse_output_format(o.format);
    if (o.out_dir.empty()) {
        emit(t, fmt, std::cout);
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to stdout");
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(o.out_dir, ec);
    const auto path = std::filesystem::path(o.out_dir) / (stem + (fmt == OutputFormat::Csv ? ".csv" : ".dat"));
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    emit(t, fmt, f);
    f.close();
    if (!f) throw IoError("failed writing " + path.string());
    std::cerr << "wrote " << path.string() << "\n";
}

struct LifetimeOptions {
    std::optional<std::string> procedure;
    std::optional<double> iat_s;
    std::vector<std::string> sweeps;
};

int run_lifetime(const CommonOptions& o, const LifetimeOptions& lo) {
    SweepSpec spec;
    spec.fixed = base_scenario(o);
    const bool from_file = !o.scenario_file.empty();

    std::vector<SweepDimension> dims;
    for (const auto& s : lo.sweeps) dims.push_back(parse_sweep(s));

    auto swept = [&](SweepAxis a) {
        return std::any_of(dims.begin(), dims.end(), [&](const auto& d) { return d.axis == a; });
    };
    auto pin = [&](SweepAxis a, const std::optional<std::string>& v) {
        if (v && swept(a)) throw ConfigError("an axis cannot be both fixed and swept");
        if (v) {
            apply_axis(spec.fixed, a, *v);
        } else if (!from_file && !swept(a)) {
            // Unpinned axes expand to their full default range.
            dims.push_back({a, default_axis_values(a)});
        }
    };
    std::optional<std::string> iat;
    if (lo.iat_s) iat = io::fmt_double(*lo.iat_s);
    pin(SweepAxis::Procedure, lo.procedure);
    pin(SweepAxis::Case, o.traffic_case);
    pin(SweepAxis::Coverage, o.coverage);
    pin(SweepAxis::Iat, iat);

    // Canonical nesting: procedure, case, coverage, iat (innermost).
    std::stable_sort(dims.begin(), dims.end(), [](const auto& a, const auto& b) {
        auto rank = [](SweepAxis x) {
            switch (x) {
                case SweepAxis::Procedure: return 0;
                case SweepAxis::Case: return 1;
                case SweepAxis::Coverage: return 2;
                case SweepAxis::Iat: return 3;
            }
            return 4;
        };
        return rank(a.axis) < rank(b.axis);
    });
    spec.dimensions = std::move(dims);

    const auto result = run_lifetime_sweep(spec, catalog(o));
    write_table(lifetime_table(result), o, "lifetime");
    if (result.any_invalid()) {
        for (const auto& r : result.rows) {
            if (!r.error.empty()) std::cerr << r.procedure << " " << r.traffic_case << " " << r.coverage << ": " << r.error << "\n";
        }
        return 1;
    }
    return 0;
}

int run_capacity(const CommonOptions& o) {
    CapacityFilter filter;
    if (o.traffic_case) filter.cases = {parse_traffic_case(*o.traffic_case)};
    if (o.coverage) filter.coverages = {parse_coverage_level(*o.coverage)};
    const auto rows = run_capacity_report(base_scenario(o), catalog(o), filter);
    write_table(capacity_table(rows), o, "capacity");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NB-IoT small-data procedure simulator: battery lifetime and cell capacity"};
    app.require_subcommand(1);

    CommonOptions lifetime_common;
    LifetimeOptions lifetime_opts;
    auto* lifetime = app.add_subcommand("lifetime", "battery lifetime and energy shares per sweep point");
    add_common(lifetime, lifetime_common);
    lifetime->add_option("--procedure", lifetime_opts.procedure, "SR, CP or UP");
    lifetime->add_option("--iat", lifetime_opts.iat_s, "inter-arrival time in seconds");
    lifetime->add_option("--sweep", lifetime_opts.sweeps, "axis[=v1,v2,...] with axis in iat, coverage, procedure, case")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    CommonOptions capacity_common;
    auto* capacity = app.add_subcommand("capacity", "capacity gain of CP and UP relative to SR");
    add_common(capacity, capacity_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (lifetime->parsed()) return run_lifetime(lifetime_common, lifetime_opts);
        return run_capacity(capacity_common);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
