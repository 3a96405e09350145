#pragma once

// Seeded property suites behind `hlf check` and the acceptance runner.

#include <cstdint>
#include <string>
#include <vector>

#include "hlf/basic_open.hpp"

namespace hlf {

struct CheckLine {
    std::string name;
    int64_t passed = 0;
    int64_t failed = 0;
    Json detail = Json::object(); // counts and the first failure, never timings

    bool ok() const { return failed == 0 && passed > 0; }
    Json to_json() const;
};

struct SuiteReport {
    std::string suite;
    uint64_t seed = 0;
    int battery = 100;
    std::vector<CheckLine> checks;

    bool ok() const;
    const CheckLine &check(const std::string &name) const;
    Json to_json() const;
};

// axioms, topology, counterexamples, points, weil
const std::vector<std::string> &suite_names();

// battery bounds the descriptor batteries (certificate replay uses 10x)
SuiteReport run_suite(const std::string &name, uint64_t seed, int battery = 100);

} // namespace hlf
