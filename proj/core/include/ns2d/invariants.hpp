#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ns2d/config.hpp"

namespace ns2d {

/// One row of the invariant table. An invariant passes when its measured
/// defect is finite and does not exceed the tolerance.
struct InvariantResult {
    std::string name;
    double defect = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Tolerance for `name`: the environment variable NS2D_TOL_<NAME> (upper
/// case) when set and parseable, else `fallback`.
double invariant_tolerance(const std::string& name, double fallback);

/// Runs the invariant suite on a small grid derived from the config (N capped
/// at 64, domain length and seed taken from it).
std::vector<InvariantResult> run_invariant_suite(const ExperimentConfig& config);

void print_invariant_table(std::ostream& out, const std::vector<InvariantResult>& results);

}  // namespace ns2d
