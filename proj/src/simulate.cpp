#include "hawkesnet/simulate.hpp"

#include "hawkesnet/penalty.hpp"
#include "hawkesnet/rng.hpp"
#include "sweep.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace hawkesnet {

EventData simulate(const SimConfig& config) {
    const ModelParams& params = config.params;
    params.validate();
    if (!(config.horizon > 0.0) || !std::isfinite(config.horizon)) {
        throw std::invalid_argument("simulate: horizon must be positive and finite");
    }
    if (config.require_stationary) {
        const double rho = spectral_radius(branching_matrix(params));
        if (!(rho < 1.0)) {
            std::ostringstream msg;
            msg << "simulate: non-stationary parameters (spectral radius " << rho << ")";
            throw std::domain_error(msg.str());
        }
    }

    const std::size_t d = params.dim();
    const auto n = static_cast<Eigen::Index>(d);
    Rng rng(config.seed);
    detail::KernelState state(params.alpha);
    std::vector<std::vector<double>> events(d);
    std::size_t accepted = 0;

    VectorXd lambda = params.mu;
    double bound = lambda.sum();
    double t = 0.0;
    while (true) {
        if (!(bound > 0.0)) break;  // nothing can ever fire again
        const double wait = rng.exponential(bound);
        const double proposal = t + wait;
        if (!(proposal <= config.horizon)) break;
        state.advance(proposal - t);
        t = proposal;

        lambda = params.mu + params.A.cwiseProduct(state.H()).rowwise().sum();
        const double total = lambda.sum();
        if (!std::isfinite(total)) throw SimulationError("simulate: non-finite intensity");
        assert(total <= bound * (1.0 + 1e-9));

        if (rng.uniform() * bound < total) {
            const double target = rng.uniform() * total;
            Eigen::Index node = 0;
            double cumulative = lambda(0);
            while (cumulative <= target && node + 1 < n) cumulative += lambda(++node);
            auto& times = events[static_cast<std::size_t>(node)];
            if (times.empty() || times.back() < t) {
                times.push_back(t);
                state.jump(static_cast<std::size_t>(node));
                ++accepted;
                if (config.max_events && accepted > *config.max_events) {
                    throw SimulationError("simulate: max_events exceeded (parameters may be non-stationary)");
                }
            }
            lambda = params.mu + params.A.cwiseProduct(state.H()).rowwise().sum();
            bound = lambda.sum();
        } else {
            bound = total;
        }
    }
    return EventData(config.horizon, std::move(events));
}

ScenarioConfig ScenarioConfig::communities(std::uint64_t seed) {
    ScenarioConfig config;
    config.d = 100;
    config.boxes = {{1, 20}, {10, 50}, {35, 56}, {65, 100}};
    config.seed = seed;
    return config;
}

std::vector<BoxRange> scaled_community_boxes(std::size_t d) {
    const double scale = static_cast<double>(d) / 100.0;
    std::vector<BoxRange> boxes;
    for (const auto& box : ScenarioConfig::communities(0).boxes) {
        auto first = static_cast<std::size_t>(std::ceil(static_cast<double>(box.first) * scale));
        auto last = static_cast<std::size_t>(std::lround(static_cast<double>(box.last) * scale));
        first = std::clamp<std::size_t>(first, 1, d);
        last = std::clamp<std::size_t>(last, first, d);
        boxes.push_back({first, last});
    }
    return boxes;
}

ScenarioConfig ScenarioConfig::scaled_communities(std::size_t d, std::uint64_t seed) {
    ScenarioConfig config = communities(seed);
    config.d = d;
    config.boxes = scaled_community_boxes(d);
    return config;
}

Scenario generate_scenario(const ScenarioConfig& config) {
    const std::size_t d = config.d;
    if (d == 0) throw std::invalid_argument("generate_scenario: d must be positive");
    if (!(config.target_opnorm > 0.0)) throw std::invalid_argument("generate_scenario: target_opnorm must be positive");
    if (!(config.alpha > 0.0)) throw std::invalid_argument("generate_scenario: alpha must be positive");
    if (config.baseline_lo < 0.0 || config.baseline_hi < config.baseline_lo) {
        throw std::invalid_argument("generate_scenario: invalid baseline range");
    }
    if (config.box_value_lo < 0.0 || config.box_value_hi < config.box_value_lo) {
        throw std::invalid_argument("generate_scenario: invalid box value range");
    }
    const auto n = static_cast<Eigen::Index>(d);
    SupportMatrix in_box = SupportMatrix::Constant(n, n, false);
    for (const auto& box : config.boxes) {
        if (box.first < 1 || box.last > d || box.first > box.last) {
            throw std::invalid_argument("generate_scenario: box outside [1, d]");
        }
        const auto first = static_cast<Eigen::Index>(box.first - 1);
        const auto size = static_cast<Eigen::Index>(box.last - box.first + 1);
        in_box.block(first, first, size, size) = true;
    }
    if (!in_box.any()) throw std::invalid_argument("generate_scenario: empty box union");

    Rng rng(config.seed);
    MatrixXd A = MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            if (in_box(j, k)) A(j, k) = rng.uniform(config.box_value_lo, config.box_value_hi);
        }
    }
    VectorXd mu(n);
    for (Eigen::Index j = 0; j < n; ++j) mu(j) = rng.uniform(config.baseline_lo, config.baseline_hi);

    const double norm = operator_norm(A);
    if (!(norm > 0.0)) throw std::invalid_argument("generate_scenario: sampled matrix is zero (empty support)");
    A *= config.target_opnorm / norm;

    Scenario scenario{ModelParams::with_uniform_decay(std::move(mu), A, config.alpha), (A.array() != 0.0)};
    const double rho = spectral_radius(branching_matrix(scenario.params));
    if (!(rho < 1.0)) {
        std::ostringstream msg;
        msg << "generate_scenario: scaled matrix is not stationary (spectral radius " << rho << ")";
        throw std::domain_error(msg.str());
    }
    return scenario;
}

}  // namespace hawkesnet
