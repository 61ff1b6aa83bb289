#include "hawkesnet/simulate.hpp"

#include "hawkesnet/io.hpp"
#include "hawkesnet/penalty.hpp"
#include "hawkesnet/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace hawkesnet;

namespace {

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;
    std::size_t n = 0;
};

SampleMoments moments(const std::vector<double>& xs) {
    SampleMoments m;
    m.n = xs.size();
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(m.n);
    for (const double x : xs) m.variance += (x - m.mean) * (x - m.mean);
    m.variance /= static_cast<double>(m.n - 1);
    return m;
}

}  // namespace

TEST(Simulate, PoissonCountsMatchMeanAndVariance) {
    const auto params = ModelParams::with_uniform_decay(VectorXd::Constant(2, 0.1), MatrixXd::Zero(2, 2), 1.0);
    const double T = 1000.0;
    const std::size_t reps = 500;
    std::vector<std::vector<double>> counts(2);
    for (std::size_t r = 0; r < reps; ++r) {
        const EventData data = simulate({params, T, stream_seed(42, r), std::nullopt, true});
        for (std::size_t k = 0; k < 2; ++k) counts[k].push_back(static_cast<double>(data.count(k)));
    }
    const double expected = 0.1 * T;
    for (const auto& c : counts) {
        const SampleMoments m = moments(c);
        const double n = static_cast<double>(m.n);
        // Poisson: Var = mean, and Var(s^2) ~ (mu4 - sigma^4 (n-3)/(n-1)) / n with mu4 = lambda + 3 lambda^2.
        const double se_mean = std::sqrt(expected / n);
        const double mu4 = expected + 3.0 * expected * expected;
        const double se_var = std::sqrt((mu4 - expected * expected * (n - 3.0) / (n - 1.0)) / n);
        EXPECT_NEAR(m.mean, expected, 3.0 * se_mean);
        EXPECT_NEAR(m.variance, expected, 3.0 * se_var);
    }
}

TEST(Simulate, SingleRunPoissonCount) {
    const auto params = ModelParams::with_uniform_decay(VectorXd::Constant(1, 0.1), MatrixXd::Zero(1, 1), 1.0);
    const EventData data = simulate({params, 1000.0, 7, std::nullopt, true});
    EXPECT_NEAR(static_cast<double>(data.total_count()), 100.0, 3.0 * std::sqrt(100.0));
}

TEST(Simulate, ScalarHawkesRateMatchesStationaryMean) {
    const auto params = ModelParams::with_uniform_decay(VectorXd::Constant(1, 0.5), MatrixXd::Constant(1, 1, 0.5), 1.0);
    const double T = 2000.0;
    std::vector<double> rates;
    for (std::size_t r = 0; r < 100; ++r) {
        const EventData data = simulate({params, T, stream_seed(9, r), std::nullopt, true});
        rates.push_back(static_cast<double>(data.total_count()) / T);
    }
    const SampleMoments m = moments(rates);
    const double se = std::sqrt(m.variance / static_cast<double>(m.n));
    EXPECT_NEAR(m.mean, mean_stationary_intensity(params)(0), 3.0 * se);
}

TEST(Simulate, DeterministicForSeed) {
    const auto scenario = generate_scenario(ScenarioConfig::scaled_communities(10, 3));
    const EventData a = simulate({scenario.params, 200.0, 1234, std::nullopt, true});
    const EventData b = simulate({scenario.params, 200.0, 1234, std::nullopt, true});
    const EventData c = simulate({scenario.params, 200.0, 1235, std::nullopt, true});
    EXPECT_EQ(io::events_to_json(a), io::events_to_json(b));
    EXPECT_NE(io::events_to_json(a), io::events_to_json(c));
}

TEST(Simulate, TimestampsStrictlyIncreasingInWindow) {
    const auto scenario = generate_scenario(ScenarioConfig::scaled_communities(20, 8));
    const EventData data = simulate({scenario.params, 300.0, 5, std::nullopt, true});
    for (const auto& times : data.events()) {
        for (std::size_t i = 0; i < times.size(); ++i) {
            EXPECT_GT(times[i], 0.0);
            EXPECT_LE(times[i], 300.0);
            if (i > 0) EXPECT_LT(times[i - 1], times[i]);
        }
    }
}

TEST(Simulate, MaxEventsAndStationarityGuards) {
    const auto explosive = ModelParams::with_uniform_decay(VectorXd::Constant(1, 1.0), MatrixXd::Constant(1, 1, 1.5), 1.0);
    EXPECT_THROW(simulate({explosive, 100.0, 1, std::nullopt, true}), std::domain_error);
    EXPECT_THROW(simulate({explosive, 100.0, 1, std::size_t{500}, false}), SimulationError);
}

TEST(Scenario, CommunityScenarioHasUnitOperatorNormScaling) {
    const Scenario s = generate_scenario(ScenarioConfig::communities(17));
    EXPECT_NEAR(operator_norm(s.params.A), 0.8, 1e-10);
    // Entries outside the union of the boxes are zero.
    const std::vector<BoxRange> boxes{{1, 20}, {10, 50}, {35, 56}, {65, 100}};
    for (Eigen::Index j = 0; j < 100; ++j) {
        for (Eigen::Index k = 0; k < 100; ++k) {
            bool inside = false;
            for (const auto& b : boxes) {
                const auto lo = static_cast<Eigen::Index>(b.first - 1);
                const auto hi = static_cast<Eigen::Index>(b.last - 1);
                inside = inside || (j >= lo && j <= hi && k >= lo && k <= hi);
            }
            if (!inside) EXPECT_EQ(s.params.A(j, k), 0.0);
            EXPECT_EQ(s.support(j, k), s.params.A(j, k) != 0.0);
        }
    }
    EXPECT_TRUE((s.params.mu.array() >= 0.0).all());
    EXPECT_TRUE((s.params.mu.array() <= 0.1).all());
    EXPECT_LT(spectral_radius(branching_matrix(s.params)), 1.0);
}

TEST(Scenario, ConstantBoxGivesRankOneMatrix) {
    ScenarioConfig config;
    config.d = 5;
    config.boxes = {{1, 5}};
    config.box_value_lo = config.box_value_hi = 0.3;
    const Scenario s = generate_scenario(config);
    EXPECT_TRUE(s.params.A.isApprox(MatrixXd::Constant(5, 5, 0.8 / 5.0), 1e-12));
    EXPECT_EQ(numerical_rank(s.params.A), 1);
}

TEST(Scenario, DegenerateInputsRejected) {
    ScenarioConfig zero_values;
    zero_values.d = 4;
    zero_values.boxes = {{1, 4}};
    zero_values.box_value_lo = zero_values.box_value_hi = 0.0;
    EXPECT_THROW(generate_scenario(zero_values), std::invalid_argument);

    ScenarioConfig no_boxes;
    no_boxes.d = 4;
    EXPECT_THROW(generate_scenario(no_boxes), std::invalid_argument);

    ScenarioConfig outside;
    outside.d = 4;
    outside.boxes = {{2, 5}};
    EXPECT_THROW(generate_scenario(outside), std::invalid_argument);

    ScenarioConfig bad_norm;
    bad_norm.d = 4;
    bad_norm.boxes = {{1, 2}};
    bad_norm.target_opnorm = 0.0;
    EXPECT_THROW(generate_scenario(bad_norm), std::invalid_argument);
}

TEST(Scenario, ScaledBoxesStayInRange) {
    const auto boxes = scaled_community_boxes(30);
    ASSERT_EQ(boxes.size(), 4u);
    EXPECT_EQ(boxes[0].first, 1u);
    EXPECT_EQ(boxes[0].last, 6u);
    EXPECT_EQ(boxes[1].first, 3u);
    EXPECT_EQ(boxes[1].last, 15u);
    EXPECT_EQ(boxes[2].first, 11u);
    EXPECT_EQ(boxes[2].last, 17u);
    EXPECT_EQ(boxes[3].first, 20u);
    EXPECT_EQ(boxes[3].last, 30u);
    EXPECT_NO_THROW(generate_scenario(ScenarioConfig::scaled_communities(30, 1)));
}
