#include "hawkesnet/features.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hawkesnet;

namespace {

// Quadratic-time reference statistics.
struct NaiveStats {
    MatrixXd B, Vhat, Vhat2;
    VectorXd Vhat1;
    double sup_h = 0.0;
};

MatrixXd H_matrix(const EventData& data, const MatrixXd& alpha, double t, bool include_t) {
    const std::size_t d = data.dim();
    MatrixXd H = MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            for (const double s : data.node(k)) {
                if (s < t || (include_t && s == t)) H(j, k) += std::exp(-alpha(j, k) * (t - s));
            }
        }
    }
    return H;
}

NaiveStats naive_stats(const EventData& data, const MatrixXd& alpha) {
    const auto n = static_cast<Eigen::Index>(data.dim());
    const double T = data.horizon();
    NaiveStats out;
    out.B = MatrixXd::Zero(n, n);
    out.Vhat = MatrixXd::Zero(n, n);
    out.Vhat1 = VectorXd::Zero(n);
    out.Vhat2 = MatrixXd::Zero(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        for (const double t : data.node(static_cast<std::size_t>(l))) {
            const MatrixXd left = H_matrix(data, alpha, t, false);
            const double inf2 = left.rowwise().squaredNorm().maxCoeff();
            out.Vhat.row(l).array() += left.row(l).array().square();
            out.Vhat1(l) += inf2;
            const double row2 = left.row(l).squaredNorm();
            if (row2 > 0.0) out.Vhat2 += inf2 * left.col(l) * left.col(l).transpose() / row2;
            if (t < T) {
                const MatrixXd right = H_matrix(data, alpha, t, true);
                out.B = out.B.cwiseMax(right);
                out.sup_h = std::max(out.sup_h, right.rowwise().norm().maxCoeff());
            }
        }
    }
    out.Vhat /= T;
    out.Vhat1 /= T;
    out.Vhat2 /= T;
    return out;
}

double max_rel_gap(const MatrixXd& a, const MatrixXd& b) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a.data()[i] == 0.0 && b.data()[i] == 0.0) continue;
        worst = std::max(worst, oracle::relative_gap(a.data()[i], b.data()[i]));
    }
    return worst;
}

EventData counted_node_data(double T, std::size_t n0, std::size_t n1) {
    std::vector<std::vector<double>> events(2);
    for (std::size_t i = 0; i < n0; ++i) events[0].push_back(T * (static_cast<double>(i) + 0.5) / static_cast<double>(n0));
    for (std::size_t i = 0; i < n1; ++i) events[1].push_back(T * (static_cast<double>(i) + 0.25) / static_cast<double>(n1));
    return EventData(T, std::move(events));
}

}  // namespace

TEST(Stats, EmptyDataGivesZeros) {
    const FeatureStats s = compute_stats(EventData::empty(3, 10.0), MatrixXd::Ones(3, 3));
    EXPECT_TRUE(s.B.isZero());
    EXPECT_TRUE(s.Vhat.isZero());
    EXPECT_TRUE(s.Vhat1.isZero());
    EXPECT_TRUE(s.Vhat2.isZero());
    EXPECT_EQ(s.sup_H_2inf, 0.0);
    EXPECT_TRUE(s.node_counts.isZero());
}

TEST(Stats, ThreeEventHandValue) {
    const EventData data(3.0, {{1.0, 2.0, 3.0}});
    const FeatureStats s = compute_stats(data, MatrixXd::Ones(1, 1));
    const double e1 = std::exp(-1.0);
    const double e2 = std::exp(-2.0);
    EXPECT_NEAR(s.Vhat(0, 0), (e1 * e1 + (e1 + e2) * (e1 + e2)) / 3.0, 1e-15);
    EXPECT_NEAR(s.Vhat(0, 0), 0.12952, 1e-5);
    EXPECT_NEAR(s.H_at_events[0](2, 0), e1 + e2, 1e-15);
    // Right-limit after the event at 2; the jump at 3 = T lies outside the window.
    EXPECT_NEAR(s.B(0, 0), 1.0 + e1, 1e-15);
}

TEST(Stats, ScalarCollapse) {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const EventData data = oracle::random_events(rng, 1, 50.0, 40);
        const FeatureStats s = compute_stats(data, MatrixXd::Constant(1, 1, rng.uniform(0.3, 2.0)));
        EXPECT_NEAR(s.Vhat1(0), s.Vhat(0, 0), 1e-14 * (1.0 + s.Vhat(0, 0)));
        EXPECT_NEAR(s.Vhat2(0, 0), s.Vhat(0, 0), 1e-14 * (1.0 + s.Vhat(0, 0)));
    }
}

TEST(Stats, RecursionMatchesNaiveSums) {
    Rng rng(33);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t d = 1 + trial % 4;
        const EventData data = oracle::random_events(rng, d, 30.0, 200 / d);
        const MatrixXd alpha = oracle::random_matrix(rng, d, 0.2, 3.0);
        const FeatureStats s = compute_stats(data, alpha);
        const NaiveStats ref = naive_stats(data, alpha);
        EXPECT_LE(max_rel_gap(s.B, ref.B), 1e-10);
        EXPECT_LE(max_rel_gap(s.Vhat, ref.Vhat), 1e-10);
        EXPECT_LE(max_rel_gap(s.Vhat1, ref.Vhat1), 1e-10);
        EXPECT_LE(max_rel_gap(s.Vhat2, ref.Vhat2), 1e-10);
        EXPECT_LE(oracle::relative_gap(s.sup_H_2inf, ref.sup_h), 1e-10);
        EXPECT_TRUE(s.Vhat2.isApprox(s.Vhat2.transpose(), 1e-14));
        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(s.Vhat2);
        EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12 * (1.0 + eig.eigenvalues().cwiseAbs().maxCoeff()));
    }
}

TEST(Stats, SupremumGrowsWhenEventsAdded) {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 3;
        const EventData data = oracle::random_events(rng, d, 20.0, 15);
        const MatrixXd alpha = oracle::random_matrix(rng, d, 0.3, 2.0);
        auto events = data.events();
        const auto k = static_cast<std::size_t>(rng.uniform() * d);
        events[k].push_back(rng.uniform(1e-3, 20.0));
        std::sort(events[k].begin(), events[k].end());
        events[k].erase(std::unique(events[k].begin(), events[k].end()), events[k].end());
        const FeatureStats before = compute_stats(data, alpha);
        const FeatureStats after = compute_stats(EventData(20.0, events), alpha);
        for (Eigen::Index j = 0; j < 3; ++j) {
            EXPECT_GE(after.B(j, static_cast<Eigen::Index>(k)), before.B(j, static_cast<Eigen::Index>(k)));
        }
    }
}

TEST(TheoreticalWeights, WorkedExample) {
    const EventData data = counted_node_data(100.0, 50, 20);
    const FeatureStats s = compute_stats(data, MatrixXd::Ones(2, 2));
    EXPECT_NEAR(loglog_terms::node(50.0, 1.0), 2.0 * std::log(std::log(356.0 / 112.0)), 1e-15);
    EXPECT_NEAR(loglog_terms::node(50.0, 1.0), 0.2906, 1e-4);
    const PenaltyWeights w = theoretical_weights(s, 1.0, 2, 100.0);
    EXPECT_NEAR(w.w(0), 1.3991, 1e-4);
    EXPECT_EQ(w.mode, WeightMode::theoretical);
}

TEST(TheoreticalWeights, EmptyNodeAndUnexcitedPair) {
    // Node 1 has no events, so column 1 of B and V is zero.
    const EventData data(100.0, {{10.0, 20.0, 30.0}, {}});
    const FeatureStats s = compute_stats(data, MatrixXd::Ones(2, 2));
    const double x = 2.0;
    const PenaltyWeights w = theoretical_weights(s, x, 2, 100.0);
    EXPECT_NEAR(w.w(1), 27.93 * (x + std::log(2.0)) / 100.0, 1e-15);
    EXPECT_EQ(w.W(0, 1), 0.0);
    EXPECT_EQ(w.W(1, 1), 0.0);
    EXPECT_GT(w.W(0, 0), 0.0);
    EXPECT_GT(w.W(1, 0), 0.0);
    EXPECT_EQ(loglog_terms::pair(100.0, 0.0, 0.0, x), 0.0);
}

TEST(TheoreticalWeights, ErrorsOnBadInput) {
    const FeatureStats s = compute_stats(EventData::empty(2, 10.0), MatrixXd::Ones(2, 2));
    EXPECT_THROW(theoretical_weights(s, 0.0, 2, 10.0), std::invalid_argument);
    EXPECT_THROW(theoretical_weights(s, 1.0, 2, 0.0), std::invalid_argument);
    EXPECT_THROW(theoretical_weights(s, 1.0, 3, 10.0), std::invalid_argument);
}

TEST(TheoreticalWeights, NonnegativeAndNondecreasingOnceClamped) {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 2 + trial % 3;
        const double T = 50.0;
        const EventData data = oracle::random_events(rng, d, T, 60);
        const FeatureStats s = compute_stats(data, oracle::random_matrix(rng, d, 0.5, 2.0));
        // Beyond x0 every log log argument of the node and pair terms sits at the clamp,
        // and the decreasing operator-norm terms are dominated by x itself.
        const double slope = 112.0 * (std::exp(1.0) - 0.5);
        double x0 = 1.0;
        for (Eigen::Index j = 0; j < s.node_counts.size(); ++j) x0 = std::max(x0, 6.0 * s.node_counts(j) / slope);
        for (Eigen::Index i = 0; i < s.B.size(); ++i) {
            const double b = s.B.data()[i];
            if (b > 0.0) x0 = std::max(x0, 6.0 * T * s.Vhat.data()[i] / (slope * b * b));
        }
        x0 = std::max(x0, std::sqrt(variance_opnorm(s)));
        PenaltyWeights prev = theoretical_weights(s, x0, d, T);
        for (int step = 1; step <= 40; ++step) {
            const double x = x0 + 0.5 * step;
            const PenaltyWeights cur = theoretical_weights(s, x, d, T);
            EXPECT_TRUE((cur.w.array() >= 0.0).all());
            EXPECT_TRUE((cur.W.array() >= 0.0).all());
            EXPECT_TRUE((cur.w.array() >= prev.w.array()).all());
            EXPECT_TRUE((cur.W.array() >= prev.W.array()).all());
            EXPECT_GE(cur.tau, prev.tau);
            prev = cur;
        }
    }
}

TEST(TheoreticalWeights, DecreaseJustBelowClampBoundary) {
    // With N = 50 the node term leaves the clamp at x = 300 / (112 (e - 1/2)) ~ 1.21.
    // Below it x + 2 log log(.) falls as x grows, so w(1.1) < w(1.0).
    const FeatureStats s = compute_stats(counted_node_data(100.0, 50, 20), MatrixXd::Ones(2, 2));
    const double lo = theoretical_weights(s, 1.0, 2, 100.0).w(0);
    const double hi = theoretical_weights(s, 1.1, 2, 100.0).w(0);
    EXPECT_LT(hi, lo);
    EXPECT_GT(theoretical_weights(s, 1.5, 2, 100.0).w(0), theoretical_weights(s, 1.3, 2, 100.0).w(0));
}

TEST(PracticalWeights, WorkedExampleAndZeros) {
    const EventData data(100.0, {std::vector<double>{}, {}});
    const FeatureStats empty = compute_stats(data, MatrixXd::Ones(2, 2));
    const PenaltyWeights zero = practical_weights(empty, 1.0, 1.0, 2, 100.0);
    EXPECT_TRUE(zero.w.isZero());
    EXPECT_TRUE(zero.W.isZero());

    const FeatureStats s = compute_stats(counted_node_data(100.0, 50, 20), MatrixXd::Ones(2, 2));
    const PenaltyWeights w = practical_weights(s, 1.0, 1.0, 2, 100.0);
    EXPECT_NEAR(w.w(0), std::sqrt((std::log(100.0) + std::log(2.0)) * 0.5 / 100.0), 1e-15);
    EXPECT_NEAR(w.w(0), 0.16276, 1e-5);
    EXPECT_NEAR(w.W(0, 1), std::sqrt((std::log(100.0) + std::log(2.0)) * s.Vhat(0, 1) / 100.0), 1e-15);
    EXPECT_EQ(w.tau, 0.0);

    const PenaltyWeights scaled = practical_weights(s, 3.0, 0.5, 2, 100.0);
    EXPECT_TRUE(scaled.w.isApprox(3.0 * w.w, 1e-15));
    EXPECT_TRUE(scaled.W.isApprox(0.5 * w.W, 1e-15));
}

TEST(PracticalWeights, Errors) {
    const FeatureStats s = compute_stats(EventData::empty(2, 10.0), MatrixXd::Ones(2, 2));
    EXPECT_THROW(practical_weights(s, 0.0, 1.0, 2, 10.0), std::invalid_argument);
    EXPECT_THROW(practical_weights(s, 1.0, -1.0, 2, 10.0), std::invalid_argument);
    EXPECT_THROW(practical_weights(s, 1.0, 1.0, 2, 1.0), std::invalid_argument);
}
