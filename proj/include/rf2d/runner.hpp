#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "rf2d/config.hpp"

namespace rf2d {

struct SuiteRecord {
    std::string suite;
    std::string claim;
    std::string status;  // "pass" | "fail" | "not-applicable"
    double worst_deficit = 0.0;
    nlohmann::json witness;
    nlohmann::json tolerances;
    double wall_time = 0.0;  // recorded in timings.csv, kept out of report.json
};

struct RunResult {
    std::vector<SuiteRecord> records;
    bool any_fail() const {
        for (const auto& r : records)
            if (r.status == "fail") return true;
        return false;
    }
};

// Executes the configured suites in dependency order, writing snapshots, CSV
// rows, report.json and timings.csv under cfg.output_dir.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace rf2d
