#pragma once

#include <random>

#include "nbiot/report.hpp"

namespace nbiot::test {

inline Scenario scenario(Procedure p, TrafficCase c, CoverageLevel l, double iat_h = 1.0) {
    Scenario s;
    s.procedure = p;
    s.traffic_case = c;
    s.coverage = builtin_coverage_profile(l);
    s.iat = from_s(iat_h * 3600.0);
    return s;
}

inline ValidatedScenario valid(Procedure p, TrafficCase c, CoverageLevel l, double iat_h = 1.0) {
    return validate_scenario(scenario(p, c, l, iat_h));
}

// Uniformly drawn point of the procedure x case x coverage x IAT grid.
inline Scenario random_scenario(std::mt19937& rng) {
    std::uniform_int_distribution<int> pick_p(0, 2), pick_c(0, 3), pick_l(0, 2);
    std::uniform_real_distribution<double> pick_h(1.0, 48.0);
    return scenario(kProcedures[pick_p(rng)], kTrafficCases[pick_c(rng)], kCoverageLevels[pick_l(rng)],
                    std::round(pick_h(rng) * 100.0) / 100.0);
}

}  // namespace nbiot::test
