#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace relhom {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct SuiteOptions {
    uint64_t seed = 20240101;
    bool full = true; // quick level shrinks the randomized batteries
    int threads = 1;  // workers for the oracle-equivalence battery
};

// Runs the whole verification battery and returns one result per criterion.
std::vector<CriterionResult> run_paper_suite(const SuiteOptions& opt);

// Convenience wrapper: prints one line per criterion to stdout and returns
// true when everything passed.
bool run_and_print_paper_suite(const SuiteOptions& opt);

} // namespace relhom
