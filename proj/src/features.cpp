#include "hawkesnet/features.hpp"

#include "sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace hawkesnet {

std::string to_string(WeightMode mode) {
    return mode == WeightMode::theoretical ? "theoretical" : "practical";
}

FeatureStats compute_stats(const EventData& data, const MatrixXd& alpha) {
    const std::size_t d = data.dim();
    const auto n = static_cast<Eigen::Index>(d);
    if (alpha.rows() != n || alpha.cols() != n) {
        throw std::invalid_argument("compute_stats: alpha must be d x d");
    }
    if ((alpha.array() <= 0.0).any()) {
        throw std::invalid_argument("compute_stats: alpha must be positive");
    }
    const double T = data.horizon();

    FeatureStats stats;
    stats.horizon = T;
    stats.B = MatrixXd::Zero(n, n);
    stats.Vhat = MatrixXd::Zero(n, n);
    stats.Vhat1 = VectorXd::Zero(n);
    stats.Vhat2 = MatrixXd::Zero(n, n);
    stats.node_counts = VectorXd::Zero(n);
    stats.H_at_events.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        stats.H_at_events[j].resize(static_cast<Eigen::Index>(data.count(j)), n);
        stats.node_counts(static_cast<Eigen::Index>(j)) = static_cast<double>(data.count(j));
    }

    detail::KernelState state(alpha);
    std::vector<Eigen::Index> cursor(d, 0);
    VectorXd row_norm2(n);
    double prev = 0.0;
    for (const auto& group : detail::merge_events(data)) {
        state.advance(group.time - prev);
        prev = group.time;

        const MatrixXd& H = state.H();
        row_norm2 = H.rowwise().squaredNorm();
        const double inf2 = row_norm2.maxCoeff();
        for (const std::size_t node : group.nodes) {
            const auto l = static_cast<Eigen::Index>(node);
            stats.H_at_events[node].row(cursor[node]++) = H.row(l);
            stats.Vhat.row(l).array() += H.row(l).array().square();
            stats.Vhat1(l) += inf2;
            // Zero row norm means no excitation at all; the summand is taken as 0.
            if (row_norm2(l) > 0.0) {
                stats.Vhat2.selfadjointView<Eigen::Lower>().rankUpdate(H.col(l), inf2 / row_norm2(l));
            }
        }

        for (const std::size_t node : group.nodes) state.jump(node);
        // The jump at an event located exactly at T is not reached inside [0, T].
        if (group.time < T) {
            for (const std::size_t node : group.nodes) {
                const auto k = static_cast<Eigen::Index>(node);
                stats.B.col(k) = stats.B.col(k).cwiseMax(state.H().col(k));
            }
            stats.sup_H_2inf = std::max(stats.sup_H_2inf, state.H().rowwise().norm().maxCoeff());
        }
    }

    stats.Vhat2 = stats.Vhat2.selfadjointView<Eigen::Lower>();
    stats.Vhat /= T;
    stats.Vhat1 /= T;
    stats.Vhat2 /= T;
    return stats;
}

namespace loglog_terms {

namespace {
double clamped_loglog(double arg) {
    return std::log(std::log(std::max(arg, std::exp(1.0))));
}
}  // namespace

double node(double count, double x) {
    return 2.0 * clamped_loglog((6.0 * count + 56.0 * x) / (112.0 * x));
}

double pair(double horizon, double vhat, double b, double x) {
    if (b == 0.0) return 0.0;
    const double b2 = b * b;
    return 2.0 * clamped_loglog((6.0 * horizon * vhat + 56.0 * x * b2) / (112.0 * x * b2));
}

double opnorm(double v1_op, double v2_op, double sup_h, double x) {
    const double sup_h2 = sup_h * sup_h;
    const double shift = 2.0 * (4.0 + sup_h2 / 3.0) * x;
    return 2.0 * clamped_loglog((2.0 * v1_op + shift) / x) + 2.0 * clamped_loglog((2.0 * v2_op + shift) / x) +
           2.0 * clamped_loglog(sup_h2);
}

}  // namespace loglog_terms

namespace {

// Operator norms of V1 (diagonal) and V2 (symmetric PSD, so its largest eigenvalue).
std::pair<double, double> variance_opnorms(const FeatureStats& stats) {
    if (stats.Vhat1.size() == 0) return {0.0, 0.0};
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(stats.Vhat2, Eigen::EigenvaluesOnly);
    return {stats.Vhat1.maxCoeff(), eig.eigenvalues().cwiseAbs().maxCoeff()};
}

}  // namespace

double variance_opnorm(const FeatureStats& stats) {
    const auto [v1, v2] = variance_opnorms(stats);
    return std::max(v1, v2);
}

PenaltyWeights theoretical_weights(const FeatureStats& stats, double x, std::size_t d, double horizon) {
    if (!(x > 0.0)) throw std::invalid_argument("theoretical_weights: x must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("theoretical_weights: T must be positive");
    if (stats.dim() != d) throw std::invalid_argument("theoretical_weights: dimension mismatch");

    const auto n = static_cast<Eigen::Index>(d);
    const double T = horizon;
    const double log_d = std::log(static_cast<double>(d));

    PenaltyWeights weights;
    weights.mode = WeightMode::theoretical;
    weights.x = x;
    weights.w.resize(n);
    weights.W.resize(n, n);

    for (Eigen::Index j = 0; j < n; ++j) {
        const double count = stats.node_counts(j);
        const double level = x + log_d + loglog_terms::node(count, x);
        weights.w(j) = 6.0 * std::sqrt(2.0) * std::sqrt(level * (count / T) / T) + 27.93 * level / T;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double b = stats.B(j, k);
            if (b == 0.0) {
                weights.W(j, k) = 0.0;
                continue;
            }
            const double v = stats.Vhat(j, k);
            const double level = x + 2.0 * log_d + loglog_terms::pair(T, v, b, x);
            weights.W(j, k) = 4.0 * std::sqrt(2.0) * std::sqrt(level * v / T) + 18.62 * level * b / T;
        }
    }

    const auto [v1, v2] = variance_opnorms(stats);
    const double level = x + log_d + loglog_terms::opnorm(v1, v2, stats.sup_H_2inf, x);
    weights.tau = 8.0 * std::sqrt(level * std::max(v1, v2) / T) +
                  2.0 * level * (10.34 + 2.65 * stats.sup_H_2inf) / T;
    return weights;
}

PenaltyWeights practical_weights(const FeatureStats& stats, double c1, double c2, std::size_t d, double horizon) {
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw std::invalid_argument("practical_weights: c1 and c2 must be positive");
    if (!(horizon > 1.0)) throw std::invalid_argument("practical_weights: T must exceed 1");
    if (stats.dim() != d) throw std::invalid_argument("practical_weights: dimension mismatch");

    const double T = horizon;
    const double level = std::log(T) + std::log(static_cast<double>(d));

    PenaltyWeights weights;
    weights.mode = WeightMode::practical;
    weights.x = std::log(T);
    weights.c1 = c1;
    weights.c2 = c2;
    weights.w = c1 * (level * stats.node_counts.array() / T / T).sqrt().matrix();
    weights.W = c2 * (level * stats.Vhat.array() / T).sqrt().matrix();
    weights.tau = 0.0;
    return weights;
}

}  // namespace hawkesnet
