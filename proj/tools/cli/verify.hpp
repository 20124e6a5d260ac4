#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace queuetail::cli {

struct CheckRecord {
    std::string suite;
    std::string check;
    double expected = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Suite names in the order `verify --suite all` runs them.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Runs one suite. Throws std::invalid_argument for an unknown name.
std::vector<CheckRecord> run_suite(const std::string& name);

nlohmann::json report_json(const std::vector<CheckRecord>& records);

}  // namespace queuetail::cli
