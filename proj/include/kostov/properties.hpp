#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kostov {

struct PropertyResult {
    std::string name;
    int instances = 0;
    int failures = 0;
    std::string first_failure; // instance index and reason of the first failure
    double max_numeric_error = 0.0; // floating checks only

    bool ok() const { return instances > 0 && failures == 0; }
};

// Names of the seeded randomized property suites, in run order.
std::vector<std::string> property_names();

// Runs one suite on the given number of instances. Instance i draws from a
// generator seeded by (seed, name, i), so results do not depend on run order.
PropertyResult run_property(const std::string& name, std::uint64_t seed, int instances);

std::vector<PropertyResult> run_property_suites(std::uint64_t seed, int instances);

} // namespace kostov
