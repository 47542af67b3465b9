#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "kad/instance.hpp"
#include "kad/rule.hpp"

namespace kad {

/// Default hyperparameter grids.
struct DefaultGrids {
    std::vector<double> lambdas{0.3, 0.4};
    std::vector<double> budgets{0.6, 0.9};
    std::vector<double> mus{0.05, 0.1};
    std::vector<int> gammas{3, 5, 7};
};
DefaultGrids default_grids();

struct ExperimentConfig {
    std::string rule_text = "threshold:0.4";
    int gamma = 5;
    std::uint64_t seed = 0;
    std::size_t num_instances = 100;
    std::size_t vocab_size = 16;
    double concentration = 1.0;
    double correlation = 0.5;
    std::string source = "synthetic"; // "synthetic" or "replay:<path>"
    int threads = 0; // 0: KAD_THREADS env var, else hardware concurrency
};

struct ExperimentReport {
    std::string csv; // fixed columns, one row per instance
    nlohmann::json summary;
};

/// Resolved worker count: explicit > KAD_THREADS > hardware concurrency.
int resolve_threads(int requested);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// run_experiment plus instances.csv and summary.json under out_dir.
void run_experiment_to_dir(const ExperimentConfig& cfg,
                           const std::filesystem::path& out_dir);

std::vector<InstanceRecord> make_stream(const ExperimentConfig& cfg);

} // namespace kad
