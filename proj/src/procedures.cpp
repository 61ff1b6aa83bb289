#include "hawkesnet/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hawkesnet {

std::string to_string(Procedure procedure) {
    switch (procedure) {
        case Procedure::NoPen: return "NoPen";
        case Procedure::L1: return "L1";
        case Procedure::wL1: return "wL1";
        case Procedure::L1Nuclear: return "L1Nuclear";
        case Procedure::wL1Nuclear: return "wL1Nuclear";
    }
    return "unknown";
}

Procedure parse_procedure(const std::string& name) {
    for (const auto p : {Procedure::NoPen, Procedure::L1, Procedure::wL1, Procedure::L1Nuclear, Procedure::wL1Nuclear}) {
        if (to_string(p) == name) return p;
    }
    throw std::invalid_argument("unknown procedure: " + name);
}

bool uses_trace(Procedure procedure) {
    return procedure == Procedure::L1Nuclear || procedure == Procedure::wL1Nuclear;
}

PenaltySpec make_penalty(Procedure procedure, const FeatureStats& stats, const Tuning& tuning) {
    const std::size_t d = stats.dim();
    if (procedure == Procedure::NoPen) return PenaltySpec::none(d);
    if (tuning.c1 < 0.0 || tuning.c2 < 0.0 || tuning.tau < 0.0) {
        throw std::invalid_argument("make_penalty: tuning constants must be nonnegative");
    }

    const PenaltyWeights base = practical_weights(stats, 1.0, 1.0, d, stats.horizon);
    PenaltySpec spec;
    spec.use_l1_mu = true;
    spec.use_l1_A = true;
    spec.use_trace = uses_trace(procedure);
    spec.weights = base;
    spec.weights.c1 = tuning.c1;
    spec.weights.c2 = tuning.c2;
    spec.weights.tau = spec.use_trace ? tuning.tau : 0.0;

    const bool weighted = procedure == Procedure::wL1 || procedure == Procedure::wL1Nuclear;
    if (weighted) {
        spec.weights.w = tuning.c1 * base.w;
        spec.weights.W = tuning.c2 * base.W;
    } else {
        spec.weights.w.setConstant(tuning.c1 * base.w.mean());
        spec.weights.W.setConstant(tuning.c2 * base.W.mean());
    }
    return spec;
}

Theta default_init(LossKind kind, const VectorXd& counts, double horizon) {
    Theta theta = Theta::zeros(static_cast<std::size_t>(counts.size()));
    if (kind == LossKind::log_likelihood) theta.mu = counts / horizon;
    return theta;
}

namespace {

// Loss oracle and statistics of one data set, shared by every fit on it.
struct PreparedData {
    FeatureStats stats;
    LossOracle loss;
};

PreparedData prepare(const EventData& data, const MatrixXd& alpha, LossKind kind) {
    PreparedData prepared{compute_stats(data, alpha), {}};
    if (kind == LossKind::log_likelihood) {
        prepared.loss = log_likelihood_oracle(build_likelihood_cache(prepared.stats, data, alpha));
    } else {
        prepared.loss = least_squares_oracle(precompute_gram(data, alpha));
    }
    return prepared;
}

FitResult fit_prepared(const PreparedData& prepared, Procedure procedure, const Tuning& tuning, FitConfig config) {
    config.penalty = make_penalty(procedure, prepared.stats, tuning);
    const Theta init = config.init ? *config.init
                                   : default_init(config.loss_kind, prepared.stats.node_counts, prepared.stats.horizon);
    return fit(config, prepared.loss, init);
}

// Held-out log-likelihood per unit time with every event intensity floored at
// kIntensityFloor, so fits that zero out a node active in the test half are
// ranked by how many events they miss instead of all tying at -inf.
constexpr double kIntensityFloor = 1e-8;

double held_out_score(const VectorXd& mu, const MatrixXd& A, const LikelihoodCache& cache) {
    double value = -mu.sum() * cache.horizon - A.cwiseProduct(cache.integrals).sum();
    for (std::size_t j = 0; j < cache.dim(); ++j) {
        const MatrixXd& H = cache.H_at_events[j];
        if (H.rows() == 0) continue;
        const VectorXd lambda = (H * A.row(static_cast<Eigen::Index>(j)).transpose()).array() +
                                mu(static_cast<Eigen::Index>(j));
        value += lambda.array().max(kIntensityFloor).log().sum();
    }
    return value / cache.horizon;
}

}  // namespace

FitResult fit_procedure(const EventData& data, const MatrixXd& alpha, Procedure procedure, const Tuning& tuning,
                        FitConfig base) {
    const PreparedData prepared = prepare(data, alpha, base.loss_kind);
    return fit_prepared(prepared, procedure, tuning, std::move(base));
}

CvResult cross_validate(const EventData& data, const MatrixXd& alpha, Procedure procedure, const CvGrid& grid,
                        const FitConfig& base) {
    if (grid.c1.empty() || grid.c2.empty() || grid.tau.empty()) {
        throw std::invalid_argument("cross_validate: empty grid");
    }
    const double half = data.horizon() / 2.0;
    const EventData train = data.truncate(half);
    const EventData test = data.window_after(half);
    if (train.total_count() == 0 || test.total_count() == 0) {
        throw std::invalid_argument("cross_validate: empty train or test half");
    }

    const PreparedData prepared = prepare(train, alpha, base.loss_kind);
    const LikelihoodCache test_cache = build_likelihood_cache(test, alpha);

    const std::vector<double> zero{0.0};
    const bool penalized = procedure != Procedure::NoPen;
    const auto& c1s = penalized ? grid.c1 : zero;
    const auto& c2s = penalized ? grid.c2 : zero;
    const auto& taus = uses_trace(procedure) ? grid.tau : zero;

    CvResult result;
    result.best_score = -std::numeric_limits<double>::infinity();
    bool have_best = false;
    for (const double c1 : c1s) {
        for (const double c2 : c2s) {
            for (const double tau : taus) {
                const Tuning tuning{c1, c2, tau};
                const FitResult fitted = fit_prepared(prepared, procedure, tuning, base);
                const double score = held_out_score(fitted.mu_hat, fitted.A_hat.cwiseMax(0.0), test_cache);
                result.scores.push_back({tuning, score});
                if (!have_best || score > result.best_score) {
                    result.best = tuning;
                    result.best_score = score;
                    have_best = true;
                }
            }
        }
    }
    return result;
}

}  // namespace hawkesnet
