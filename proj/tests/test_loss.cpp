#include "hawkesnet/loss.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace hawkesnet;

namespace {

double max_rel_gap(const MatrixXd& a, const MatrixXd& b) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (std::abs(a.data()[i]) < 1e-300 && std::abs(b.data()[i]) < 1e-300) continue;
        worst = std::max(worst, oracle::relative_gap(a.data()[i], b.data()[i]));
    }
    return worst;
}

// Quadrature version of the least-squares contrast, straight from its integral form.
double quadrature_least_squares(const VectorXd& mu, const MatrixXd& A, const EventData& data, const MatrixXd& alpha) {
    const ModelParams p(mu, A, alpha);
    double value = 0.0;
    for (std::size_t j = 0; j < data.dim(); ++j) {
        value += oracle::integrate(data, [&](double t) {
            const double l = oracle::intensity(p, data, j, t);
            return l * l;
        });
        double jumps = 0.0;
        for (const double t : data.node(j)) jumps += oracle::intensity(p, data, j, t);
        value -= 2.0 * jumps;
    }
    return value / data.horizon();
}

double quadrature_nll(const VectorXd& mu, const MatrixXd& A, const EventData& data, const MatrixXd& alpha) {
    const ModelParams p(mu, A, alpha);
    double value = 0.0;
    for (std::size_t j = 0; j < data.dim(); ++j) {
        for (const double t : data.node(j)) value += std::log(oracle::intensity(p, data, j, t));
        value -= oracle::integrate(data, [&](double t) { return oracle::intensity(p, data, j, t); });
    }
    return -value / data.horizon();
}

}  // namespace

TEST(Gram, NoEventsIsZero) {
    const PrecomputedGram g = precompute_gram(EventData::empty(2, 5.0), MatrixXd::Ones(2, 2));
    EXPECT_TRUE(g.psi.isZero());
    EXPECT_TRUE(g.S.isZero());
    EXPECT_TRUE(g.counts.isZero());
    for (const auto& Gj : g.G) EXPECT_TRUE(Gj.isZero());
}

TEST(Gram, SingleEventHandValues) {
    const PrecomputedGram g = precompute_gram(EventData(3.0, {{1.0}}), MatrixXd::Ones(1, 1));
    EXPECT_NEAR(g.psi(0, 0), (1.0 - std::exp(-2.0)) / 3.0, 1e-15);
    EXPECT_NEAR(g.psi(0, 0), 0.28822, 1e-5);
    EXPECT_NEAR(g.G[0](0, 0), (1.0 - std::exp(-4.0)) / 6.0, 1e-15);
    EXPECT_NEAR(g.G[0](0, 0), 0.16361, 1e-5);
    EXPECT_EQ(g.S(0, 0), 0.0);
    EXPECT_EQ(g.counts(0), 1.0);
}

TEST(Gram, MatchesQuadrature) {
    Rng rng(2024);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t d = 2 + trial % 2;
        const EventData data = oracle::random_events(rng, d, 15.0, 12);
        // Alternate between a shared decay and distinct per-pair decays.
        const MatrixXd alpha = trial % 2 == 0 ? MatrixXd::Constant(static_cast<Eigen::Index>(d),
                                                                   static_cast<Eigen::Index>(d), 1.3)
                                              : oracle::random_matrix(rng, d, 0.3, 2.5);
        const PrecomputedGram g = precompute_gram(data, alpha);
        const double T = data.horizon();
        const auto n = static_cast<Eigen::Index>(d);
        MatrixXd psi(n, n), S(n, n);
        for (std::size_t j = 0; j < d; ++j) {
            MatrixXd G(n, n);
            for (std::size_t k = 0; k < d; ++k) {
                const auto jj = static_cast<Eigen::Index>(j);
                const auto kk = static_cast<Eigen::Index>(k);
                psi(jj, kk) = oracle::integrate(data, [&](double t) { return oracle::H(data, alpha, j, k, t); }) / T;
                double s = 0.0;
                for (const double t : data.node(j)) s += oracle::H(data, alpha, j, k, t);
                S(jj, kk) = s / T;
                for (std::size_t m = 0; m < d; ++m) {
                    G(kk, static_cast<Eigen::Index>(m)) =
                        oracle::integrate(data, [&](double t) {
                            return oracle::H(data, alpha, j, k, t) * oracle::H(data, alpha, j, m, t);
                        }) / T;
                }
            }
            EXPECT_LE(max_rel_gap(g.G[j], G), 1e-8);
            EXPECT_TRUE(g.G[j].isApprox(g.G[j].transpose(), 1e-14));
        }
        EXPECT_LE(max_rel_gap(g.psi, psi), 1e-8);
        EXPECT_LE(max_rel_gap(g.S, S), 1e-12);
    }
}

TEST(LeastSquares, ZeroParameterAndHandValue) {
    const EventData data(2.0, {{1.0}});
    const PrecomputedGram g = precompute_gram(data, MatrixXd::Ones(1, 1));
    const LossValueGrad at_zero = least_squares(VectorXd::Zero(1), MatrixXd::Zero(1, 1), g);
    EXPECT_EQ(at_zero.value, 0.0);
    EXPECT_NEAR(at_zero.grad_mu(0), -2.0 * 1.0 / 2.0, 1e-15);

    const LossValueGrad hand = least_squares(VectorXd::Ones(1), MatrixXd::Zero(1, 1), g);
    EXPECT_NEAR(hand.value, 0.0, 1e-15);

    const ModelParams p(VectorXd::Ones(1), MatrixXd::Zero(1, 1), MatrixXd::Ones(1, 1));
    EXPECT_NEAR(least_squares(p, g).value, 0.0, 1e-15);
}

TEST(LeastSquares, MatchesIntegralForm) {
    Rng rng(12);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t d = 1 + trial % 3;
        const EventData data = oracle::random_events(rng, d, 10.0, 10);
        const MatrixXd alpha = oracle::random_matrix(rng, d, 0.5, 2.0);
        const VectorXd mu = oracle::random_vector(rng, d, 0.1, 1.0);
        const MatrixXd A = oracle::random_matrix(rng, d, 0.0, 0.5);
        const double closed = least_squares(mu, A, precompute_gram(data, alpha)).value;
        EXPECT_NEAR(closed, quadrature_least_squares(mu, A, data, alpha), 1e-9 * (1.0 + std::abs(closed)));
    }
}

TEST(LeastSquares, DimensionMismatchThrows) {
    const PrecomputedGram g = precompute_gram(EventData::empty(2, 5.0), MatrixXd::Ones(2, 2));
    EXPECT_THROW(least_squares(VectorXd::Zero(3), MatrixXd::Zero(3, 3), g), std::invalid_argument);
}

TEST(LeastSquares, GradientMatchesFiniteDifferences) {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = trial % 2 == 0 ? 1 : 3;
        const EventData data = oracle::random_events(rng, d, 20.0, 100 / d);
        const MatrixXd alpha = oracle::random_matrix(rng, d, 0.5, 2.0);
        const PrecomputedGram g = precompute_gram(data, alpha);
        const VectorXd mu = oracle::random_vector(rng, d, 0.1, 1.0);
        const MatrixXd A = oracle::random_matrix(rng, d, 0.0, 1.0);
        const LossValueGrad lg = least_squares(mu, A, g);
        const oracle::FiniteDifference fd{[&](const VectorXd& m, const MatrixXd& a) { return least_squares(m, a, g).value; }};
        const auto [gm, ga] = fd.gradient(mu, A);
        EXPECT_LE(max_rel_gap(lg.grad_mu, gm), 1e-6);
        EXPECT_LE(max_rel_gap(lg.grad_A, ga), 1e-6);
    }
}

TEST(LeastSquares, ConvexAlongSegments) {
    Rng rng(77);
    const std::size_t d = 3;
    const EventData data = oracle::random_events(rng, d, 30.0, 30);
    const PrecomputedGram g = precompute_gram(data, MatrixXd::Ones(3, 3));
    for (int trial = 0; trial < 50; ++trial) {
        const VectorXd m1 = oracle::random_vector(rng, d, 0.0, 2.0);
        const VectorXd m2 = oracle::random_vector(rng, d, 0.0, 2.0);
        const MatrixXd a1 = oracle::random_matrix(rng, d, 0.0, 2.0);
        const MatrixXd a2 = oracle::random_matrix(rng, d, 0.0, 2.0);
        const double lam = rng.uniform();
        const double mid = least_squares(lam * m1 + (1 - lam) * m2, lam * a1 + (1 - lam) * a2, g).value;
        const double chord = lam * least_squares(m1, a1, g).value + (1 - lam) * least_squares(m2, a2, g).value;
        EXPECT_LE(mid, chord + 1e-10);
    }
}

TEST(LogLikelihood, HandValue) {
    const EventData data(2.0, {{1.0}});
    const ModelParams p(VectorXd::Ones(1), MatrixXd::Zero(1, 1), MatrixXd::Ones(1, 1));
    EXPECT_NEAR(neg_log_likelihood(p, data, p.alpha).value, 1.0, 1e-15);
}

TEST(LogLikelihood, ZeroIntensityAtEventIsInfeasible) {
    const EventData data(2.0, {{1.0}});
    const ModelParams p(VectorXd::Zero(1), MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1));
    EXPECT_THROW(neg_log_likelihood(p, data, p.alpha), InfeasiblePoint);
    const LikelihoodCache cache = build_likelihood_cache(data, p.alpha);
    const LossValueGrad r = neg_log_likelihood(p.mu, p.A, cache);
    EXPECT_FALSE(r.feasible);
    EXPECT_EQ(r.value, std::numeric_limits<double>::infinity());
}

TEST(LogLikelihood, MatchesQuadrature) {
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t d = 1 + trial % 3;
        const EventData data = oracle::random_events(rng, d, 10.0, 10);
        const MatrixXd alpha = oracle::random_matrix(rng, d, 0.5, 2.0);
        const VectorXd mu = oracle::random_vector(rng, d, 0.1, 1.0);
        const MatrixXd A = oracle::random_matrix(rng, d, 0.0, 0.5);
        const double closed = neg_log_likelihood(mu, A, build_likelihood_cache(data, alpha)).value;
        EXPECT_NEAR(closed, quadrature_nll(mu, A, data, alpha), 1e-9 * (1.0 + std::abs(closed)));
    }
}

TEST(LogLikelihood, GradientMatchesFiniteDifferences) {
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = trial % 2 == 0 ? 1 : 3;
        const EventData data = oracle::random_events(rng, d, 20.0, 100 / d);
        const MatrixXd alpha = oracle::random_matrix(rng, d, 0.5, 2.0);
        const LikelihoodCache cache = build_likelihood_cache(data, alpha);
        const VectorXd mu = oracle::random_vector(rng, d, 0.2, 1.0);
        const MatrixXd A = oracle::random_matrix(rng, d, 0.0, 1.0);
        const LossValueGrad lg = neg_log_likelihood(mu, A, cache);
        ASSERT_TRUE(lg.feasible);
        const oracle::FiniteDifference fd{
            [&](const VectorXd& m, const MatrixXd& a) { return neg_log_likelihood(m, a, cache).value; }};
        const auto [gm, ga] = fd.gradient(mu, A);
        EXPECT_LE(max_rel_gap(lg.grad_mu, gm), 1e-6);
        EXPECT_LE(max_rel_gap(lg.grad_A, ga), 1e-6);
    }
}

TEST(LogLikelihood, ConvexAlongSegments) {
    Rng rng(78);
    const std::size_t d = 3;
    const EventData data = oracle::random_events(rng, d, 30.0, 30);
    const LikelihoodCache cache = build_likelihood_cache(data, MatrixXd::Ones(3, 3));
    for (int trial = 0; trial < 50; ++trial) {
        const VectorXd m1 = oracle::random_vector(rng, d, 0.05, 2.0);
        const VectorXd m2 = oracle::random_vector(rng, d, 0.05, 2.0);
        const MatrixXd a1 = oracle::random_matrix(rng, d, 0.0, 2.0);
        const MatrixXd a2 = oracle::random_matrix(rng, d, 0.0, 2.0);
        const double lam = rng.uniform();
        const double mid = neg_log_likelihood(lam * m1 + (1 - lam) * m2, lam * a1 + (1 - lam) * a2, cache).value;
        const double chord =
            lam * neg_log_likelihood(m1, a1, cache).value + (1 - lam) * neg_log_likelihood(m2, a2, cache).value;
        EXPECT_LE(mid, chord + 1e-10);
    }
}

TEST(LogLikelihood, CacheFromStatsAgrees) {
    Rng rng(90);
    const EventData data = oracle::random_events(rng, 3, 25.0, 20);
    const MatrixXd alpha = oracle::random_matrix(rng, 3, 0.5, 2.0);
    const LikelihoodCache direct = build_likelihood_cache(data, alpha);
    const LikelihoodCache via_stats = build_likelihood_cache(compute_stats(data, alpha), data, alpha);
    const VectorXd mu = VectorXd::Constant(3, 0.4);
    const MatrixXd A = MatrixXd::Constant(3, 3, 0.2);
    EXPECT_DOUBLE_EQ(neg_log_likelihood(mu, A, direct).value, neg_log_likelihood(mu, A, via_stats).value);
}

TEST(Oracles, WrapTheLosses) {
    Rng rng(13);
    const EventData data = oracle::random_events(rng, 2, 10.0, 10);
    const MatrixXd alpha = MatrixXd::Ones(2, 2);
    const VectorXd mu = VectorXd::Constant(2, 0.5);
    const MatrixXd A = MatrixXd::Constant(2, 2, 0.1);
    const PrecomputedGram g = precompute_gram(data, alpha);
    EXPECT_EQ(least_squares_oracle(g)(mu, A).value, least_squares(mu, A, g).value);
    const LikelihoodCache c = build_likelihood_cache(data, alpha);
    EXPECT_EQ(log_likelihood_oracle(c)(mu, A).value, neg_log_likelihood(mu, A, c).value);
}
