#pragma once

#include "hawkesnet/simulate.hpp"
#include "hawkesnet/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace hawkesnet {

struct ExperimentConfig {
    ScenarioConfig scenario = ScenarioConfig::communities(0);
    std::vector<double> horizons{1000, 2000, 3000, 4000, 5000};
    std::size_t n_replications = 10;
    std::vector<Procedure> procedures{Procedure::NoPen, Procedure::L1, Procedure::wL1, Procedure::L1Nuclear,
                                      Procedure::wL1Nuclear};
    CvGrid grid;
    std::uint64_t seed = 0;
    /// Per-replication CSV files go here when non-empty.
    std::filesystem::path output_dir;
    FitConfig fit;
    std::size_t threads = 1;
    /// Adds wall-clock runtimes to the rows (makes output non-reproducible).
    bool record_runtime = false;

    void validate() const;
};

struct ExperimentRow {
    Procedure procedure = Procedure::NoPen;
    double horizon = 0.0;
    std::size_t replication = 0;
    double error = 0.0;
    double auc = 0.0;
    Tuning tuning;
    int iterations = 0;
    double runtime_seconds = 0.0;
};

struct AggregateRow {
    Procedure procedure = Procedure::NoPen;
    double horizon = 0.0;
    std::size_t n = 0;
    double mean_error = 0.0;
    double mean_auc = 0.0;
};

/// Simulates each replication once at the largest horizon (scenario and
/// simulation seeded from stream_seed(seed, .) of the replication index),
/// truncates to every horizon, cross-validates each procedure, refits on the
/// full prefix and scores it. Rows are ordered by (replication, horizon,
/// procedure) regardless of the thread count.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

std::vector<AggregateRow> aggregate(const std::vector<ExperimentRow>& rows);

std::string rows_to_csv(const std::vector<ExperimentRow>& rows, bool with_runtime);
std::string aggregate_to_csv(const std::vector<AggregateRow>& rows);

/// Runs `task(i)` for i in [0, n) on up to `threads` worker threads.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& task);

}  // namespace hawkesnet
