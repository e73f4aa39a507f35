#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qwalk {

struct CheckResult {
    std::string suite;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs the named invariant suite ("fusion", "central", "block", "martin",
/// "cli", or "all"). Randomized property checks are driven by the seed.
std::vector<CheckResult> run_checks(const std::string& suite, double q, std::uint64_t seed);

}  // namespace qwalk
