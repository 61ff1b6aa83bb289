#include "hawkesnet/bounds.hpp"

#include "hawkesnet/loss.hpp"
#include "hawkesnet/penalty.hpp"
#include "hawkesnet/rng.hpp"
#include "hawkesnet/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkesnet {

std::string to_string(BoundKind kind) {
    return kind == BoundKind::pointwise ? "pointwise" : "operator-norm";
}

NoiseMatrices compute_noise(const ModelParams& params_true, const EventData& data) {
    params_true.validate();
    if (params_true.dim() != data.dim()) throw std::invalid_argument("compute_noise: dimension mismatch");
    const PrecomputedGram gram = precompute_gram(data, params_true.alpha);
    const double T = data.horizon();
    const auto n = static_cast<Eigen::Index>(data.dim());

    // int H(j,k) lambda_j = T (mu_j psi(j,k) + (G_j a_j)_k), int lambda_j = T (mu_j + <a_j, psi_j>).
    NoiseMatrices noise;
    noise.Z.resize(n, n);
    noise.M_T.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const VectorXd a = params_true.A.row(j).transpose();
        const VectorXd compensator = params_true.mu(j) * gram.psi.row(j).transpose() + gram.G[static_cast<std::size_t>(j)] * a;
        noise.Z.row(j) = T * (gram.S.row(j) - compensator.transpose());
        noise.M_T(j) = gram.counts(j) - T * (params_true.mu(j) + a.dot(gram.psi.row(j)));
    }
    noise.opnorm_Z = operator_norm(noise.Z);
    return noise;
}

MatrixXd pointwise_deviation_bound(const FeatureStats& stats, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("pointwise_deviation_bound: x must be positive");
    const auto n = static_cast<Eigen::Index>(stats.dim());
    const double T = stats.horizon;
    const double log_d = std::log(static_cast<double>(n));
    MatrixXd bound(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double v = stats.Vhat(j, k);
            const double b = stats.B(j, k);
            const double level = x + 2.0 * log_d + loglog_terms::pair(T, v, b, x);
            bound(j, k) = 2.0 * std::sqrt(2.0) * std::sqrt(level * v / T) + 9.31 * level * b / T;
        }
    }
    return bound;
}

double opnorm_deviation_bound(const FeatureStats& stats, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("opnorm_deviation_bound: x must be positive");
    const double T = stats.horizon;
    const double log_d = std::log(static_cast<double>(stats.dim()));
    const double v1 = stats.Vhat1.maxCoeff();
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(stats.Vhat2, Eigen::EigenvaluesOnly);
    const double v2 = eig.eigenvalues().cwiseAbs().maxCoeff();
    const double level = x + log_d + loglog_terms::opnorm(v1, v2, stats.sup_H_2inf, x);
    return 4.0 * std::sqrt(level * std::max(v1, v2) / T) + level * (10.34 + 2.65 * stats.sup_H_2inf) / T;
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

BoundReport run_bound_check(const BoundScenario& scenario, double x, std::size_t n_reps, std::uint64_t seed,
                            BoundKind kind) {
    if (!(x > 0.0)) throw std::invalid_argument("bound check: x must be positive");
    if (n_reps == 0) throw std::invalid_argument("bound check: n_reps must be positive");
    scenario.params.validate();
    const auto n = static_cast<Eigen::Index>(scenario.params.dim());
    const double T = scenario.horizon;

    BoundReport report;
    report.kind = kind;
    report.x = x;
    report.n_reps = n_reps;
    report.stated_bound = (kind == BoundKind::pointwise ? 30.55 : 84.9) * std::exp(-x);

    VectorXd sum_M = VectorXd::Zero(n), sum_M2 = VectorXd::Zero(n);
    MatrixXd sum_Z = MatrixXd::Zero(n, n), sum_Z2 = MatrixXd::Zero(n, n);
    double ratio_sum = 0.0;
    for (std::size_t rep = 0; rep < n_reps; ++rep) {
        SimConfig sim{scenario.params, T, stream_seed(seed, rep), std::nullopt, true};
        const EventData data = simulate(sim);
        const NoiseMatrices noise = compute_noise(scenario.params, data);
        const FeatureStats stats = compute_stats(data, scenario.params.alpha);

        sum_M += noise.M_T;
        sum_M2 += noise.M_T.cwiseAbs2();
        sum_Z += noise.Z;
        sum_Z2 += noise.Z.cwiseAbs2();
        if (noise.opnorm_Z < noise.Z.cwiseAbs().maxCoeff() * (1.0 - 1e-12)) report.norm_domination = false;

        if (kind == BoundKind::pointwise) {
            const MatrixXd bound = pointwise_deviation_bound(stats, x);
            const MatrixXd scaled = noise.Z / T;
            if ((scaled.array() > bound.array()).any()) ++report.violation_count;
            if ((-scaled.array() > bound.array()).any()) ++report.violation_count_neg;
            ratio_sum += (scaled.cwiseAbs().array() / bound.array().max(1e-300)).maxCoeff();
        } else {
            const double bound = opnorm_deviation_bound(stats, x);
            if (noise.opnorm_Z / T > bound) ++report.violation_count;
            ratio_sum += noise.opnorm_Z / T / bound;
        }
    }
    if (kind == BoundKind::opnorm) report.violation_count_neg = report.violation_count;

    const double reps = static_cast<double>(n_reps);
    report.empirical_rate = static_cast<double>(report.violation_count) / reps;
    report.wilson_ci = wilson_interval(report.violation_count, n_reps, kWilsonZ99);
    report.mean_M_T = sum_M / reps;
    report.mean_Z = sum_Z / reps;
    const double dof = std::max(1.0, reps - 1.0);
    report.se_M_T = ((sum_M2 / reps - report.mean_M_T.cwiseAbs2()).cwiseMax(0.0) * reps / dof / reps).cwiseSqrt();
    report.se_Z = ((sum_Z2 / reps - report.mean_Z.cwiseAbs2()).cwiseMax(0.0) * reps / dof / reps).cwiseSqrt();
    report.mean_ratio = ratio_sum / reps;
    return report;
}

}  // namespace

BoundReport check_pointwise_bound(const BoundScenario& scenario, double x, std::size_t n_reps, std::uint64_t seed) {
    return run_bound_check(scenario, x, n_reps, seed, BoundKind::pointwise);
}

BoundReport check_opnorm_bound(const BoundScenario& scenario, double x, std::size_t n_reps, std::uint64_t seed) {
    return run_bound_check(scenario, x, n_reps, seed, BoundKind::opnorm);
}

}  // namespace hawkesnet
