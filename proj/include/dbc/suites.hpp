#pragma once

#include <string>
#include <vector>

#include "dbc/golden.hpp"

namespace dbc {

struct RunConfig {
    int n = 3;
    std::uint64_t seed = 42;
    int samples = 25;
    Tolerance tol;
    std::vector<std::string> suites{"all"};

    // throws SchemaError
    void validate() const;
    std::vector<std::string> expanded_suites() const;
};

// factorize, poisson, groupoid, leaves, golden
const std::vector<std::string>& suite_names();

// (u,v) pairs a suite visits: all of W×W for n ≤ 3, ten seeded pairs above
std::vector<std::pair<WeylElement, WeylElement>> suite_pairs(int n, std::uint64_t seed);
std::vector<WeylElement> suite_cells(int n, std::uint64_t seed);

std::vector<CheckReport> run_suite(const std::string& name, const RunConfig& cfg);

// Sorted by (check, u, v).  No timestamp: the report is a pure function of the config.
nlohmann::json verify_report(const RunConfig& cfg);
bool report_passed(const nlohmann::json& report);

}  // namespace dbc
