#pragma once

#include "hawkesnet/model.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hawkesnet {

using SupportMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct SimConfig {
    ModelParams params;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    /// Abort once this many events have been accepted.
    std::optional<std::size_t> max_events;
    /// Reject parameters whose branching matrix has spectral radius >= 1.
    bool require_stationary = true;
};

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ogata thinning. The dominating rate is the total intensity right after
/// the last proposal, valid because exponential kernels only decay between
/// events. Accepted events are attributed to a node with probability
/// proportional to its intensity.
EventData simulate(const SimConfig& config);

/// Inclusive 1-based index range [first, last] of a square block.
struct BoxRange {
    std::size_t first = 1;
    std::size_t last = 1;
};

struct ScenarioConfig {
    std::size_t d = 100;
    double baseline_lo = 0.0;
    double baseline_hi = 0.1;
    std::vector<BoxRange> boxes;
    double box_value_lo = 0.0;
    double box_value_hi = 0.2;
    double target_opnorm = 0.8;
    double alpha = 1.0;
    std::uint64_t seed = 0;

    /// d = 100 with blocks 1:20, 10:50, 35:56, 65:100.
    static ScenarioConfig communities(std::uint64_t seed);
    /// The community blocks rescaled to d nodes (start rounded up, end rounded to nearest).
    static ScenarioConfig scaled_communities(std::size_t d, std::uint64_t seed);
};

struct Scenario {
    ModelParams params;
    SupportMatrix support;
};

/// Overlapping square blocks of uniform draws, rescaled to the target operator norm.
Scenario generate_scenario(const ScenarioConfig& config);

std::vector<BoxRange> scaled_community_boxes(std::size_t d);

}  // namespace hawkesnet
