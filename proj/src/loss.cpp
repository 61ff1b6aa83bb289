#include "hawkesnet/loss.hpp"

#include "sweep.hpp"

#include <cmath>
#include <limits>

namespace hawkesnet {

namespace {

void check_alpha(const EventData& data, const MatrixXd& alpha) {
    const auto n = static_cast<Eigen::Index>(data.dim());
    if (alpha.rows() != n || alpha.cols() != n) {
        throw std::invalid_argument("alpha must be d x d");
    }
    if ((alpha.array() <= 0.0).any()) {
        throw std::invalid_argument("alpha must be positive");
    }
}

void check_theta(const VectorXd& mu, const MatrixXd& A, std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    if (mu.size() != n || A.rows() != n || A.cols() != n) {
        throw std::invalid_argument("parameter dimensions do not match the data");
    }
}

// int_0^dt exp(-rate s) ds
double decayed_mass(double rate, double dt) {
    return -std::expm1(-rate * dt) / rate;
}

}  // namespace

PrecomputedGram precompute_gram(const EventData& data, const MatrixXd& alpha) {
    check_alpha(data, alpha);
    const std::size_t d = data.dim();
    const auto n = static_cast<Eigen::Index>(d);
    const double T = data.horizon();

    PrecomputedGram gram;
    gram.horizon = T;
    gram.psi = MatrixXd::Zero(n, n);
    gram.S = MatrixXd::Zero(n, n);
    gram.counts.resize(n);
    gram.G.assign(d, MatrixXd::Zero(n, n));
    for (std::size_t k = 0; k < d; ++k) gram.counts(static_cast<Eigen::Index>(k)) = static_cast<double>(data.count(k));

    // A pair of events u of k and v of k' contributes
    //   int_{max(u,v)}^T exp(-alpha_jk (t-u)) exp(-alpha_jk' (t-v)) dt
    // to T G[j](k,k'). Pairs are credited at the later event, where the
    // earlier partner is summarised by the left-limit H(j,k)(t-); pairs
    // sharing a timestamp are added explicitly.
    detail::KernelState state(alpha);
    MatrixXd decay_to_end(n, n);
    MatrixXd pair_mass(n, n);
    double prev = 0.0;
    for (const auto& group : detail::merge_events(data)) {
        state.advance(group.time - prev);
        prev = group.time;
        const double remaining = T - group.time;
        const MatrixXd& H = state.H();

        if (state.uniform()) {
            const double rate = state.uniform_rate();
            const double mass = decayed_mass(2.0 * rate, remaining);
            const double single = decayed_mass(rate, remaining);
            for (const std::size_t node : group.nodes) {
                const auto m = static_cast<Eigen::Index>(node);
                gram.psi.col(m).array() += single;
                gram.S.row(m) += H.row(m);
                for (std::size_t j = 0; j < d; ++j) {
                    const auto r = static_cast<Eigen::Index>(j);
                    gram.G[j].col(m) += mass * H.row(r).transpose();
                    gram.G[j].row(m) += mass * H.row(r);
                    for (const std::size_t other : group.nodes) {
                        gram.G[j](m, static_cast<Eigen::Index>(other)) += mass;
                    }
                }
            }
        } else {
            state.decay_factors(remaining, decay_to_end);
            for (const std::size_t node : group.nodes) {
                const auto m = static_cast<Eigen::Index>(node);
                gram.S.row(m) += H.row(m);
                for (Eigen::Index j = 0; j < n; ++j) {
                    gram.psi(j, m) += decayed_mass(alpha(j, m), remaining);
                }
                // pair_mass(j,k) = int_t^T exp(-(alpha_jk + alpha_jm)(s - t)) ds
                for (Eigen::Index j = 0; j < n; ++j) {
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const double rate = alpha(j, k) + alpha(j, m);
                        pair_mass(j, k) = (1.0 - decay_to_end(j, k) * decay_to_end(j, m)) / rate;
                    }
                }
                for (std::size_t j = 0; j < d; ++j) {
                    const auto r = static_cast<Eigen::Index>(j);
                    const VectorXd contrib = H.row(r).cwiseProduct(pair_mass.row(r)).transpose();
                    gram.G[j].col(m) += contrib;
                    gram.G[j].row(m) += contrib.transpose();
                    for (const std::size_t other : group.nodes) {
                        gram.G[j](m, static_cast<Eigen::Index>(other)) += pair_mass(r, static_cast<Eigen::Index>(other));
                    }
                }
            }
        }
        for (const std::size_t node : group.nodes) state.jump(node);
    }

    gram.psi /= T;
    gram.S /= T;
    for (auto& g : gram.G) g /= T;
    return gram;
}

LossValueGrad least_squares(const VectorXd& mu, const MatrixXd& A, const PrecomputedGram& gram) {
    const std::size_t d = gram.dim();
    check_theta(mu, A, d);
    const double T = gram.horizon;

    LossValueGrad out;
    out.grad_mu.resize(mu.size());
    out.grad_A.resize(A.rows(), A.cols());
    double value = 0.0;
    for (std::size_t jj = 0; jj < d; ++jj) {
        const auto j = static_cast<Eigen::Index>(jj);
        const VectorXd a = A.row(j).transpose();
        const VectorXd Ga = gram.G[jj] * a;
        const double a_psi = a.dot(gram.psi.row(j));
        value += mu(j) * mu(j) + 2.0 * mu(j) * a_psi + a.dot(Ga);
        value -= 2.0 / T * mu(j) * gram.counts(j) + 2.0 * a.dot(gram.S.row(j));
        out.grad_mu(j) = 2.0 * (mu(j) + a_psi) - 2.0 * gram.counts(j) / T;
        out.grad_A.row(j) = 2.0 * (mu(j) * gram.psi.row(j) + Ga.transpose()) - 2.0 * gram.S.row(j);
    }
    out.value = value;
    return out;
}

LossValueGrad least_squares(const ModelParams& params, const PrecomputedGram& gram) {
    return least_squares(params.mu, params.A, gram);
}

LikelihoodCache build_likelihood_cache(const EventData& data, const MatrixXd& alpha) {
    check_alpha(data, alpha);
    const std::size_t d = data.dim();
    const auto n = static_cast<Eigen::Index>(d);

    LikelihoodCache cache;
    cache.horizon = data.horizon();
    cache.H_at_events.resize(d);
    cache.counts.resize(n);
    for (std::size_t j = 0; j < d; ++j) {
        cache.H_at_events[j].resize(static_cast<Eigen::Index>(data.count(j)), n);
        cache.counts(static_cast<Eigen::Index>(j)) = static_cast<double>(data.count(j));
    }

    detail::KernelState state(alpha);
    std::vector<Eigen::Index> cursor(d, 0);
    double prev = 0.0;
    for (const auto& group : detail::merge_events(data)) {
        state.advance(group.time - prev);
        prev = group.time;
        for (const std::size_t node : group.nodes) {
            cache.H_at_events[node].row(cursor[node]++) = state.H().row(static_cast<Eigen::Index>(node));
        }
        for (const std::size_t node : group.nodes) state.jump(node);
    }

    cache.integrals = MatrixXd::Zero(n, n);
    for (std::size_t kk = 0; kk < d; ++kk) {
        const auto k = static_cast<Eigen::Index>(kk);
        for (const double t : data.node(kk)) {
            for (Eigen::Index j = 0; j < n; ++j) {
                cache.integrals(j, k) += decayed_mass(alpha(j, k), cache.horizon - t);
            }
        }
    }
    return cache;
}

LikelihoodCache build_likelihood_cache(const FeatureStats& stats, const EventData& data, const MatrixXd& alpha) {
    check_alpha(data, alpha);
    if (stats.dim() != data.dim()) throw std::invalid_argument("stats and data dimensions differ");
    const auto n = static_cast<Eigen::Index>(data.dim());
    LikelihoodCache cache;
    cache.horizon = data.horizon();
    cache.H_at_events = stats.H_at_events;
    cache.counts = stats.node_counts;
    cache.integrals = MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (const double t : data.node(static_cast<std::size_t>(k))) {
            for (Eigen::Index j = 0; j < n; ++j) {
                cache.integrals(j, k) += decayed_mass(alpha(j, k), cache.horizon - t);
            }
        }
    }
    return cache;
}

LossValueGrad neg_log_likelihood(const VectorXd& mu, const MatrixXd& A, const LikelihoodCache& cache) {
    const std::size_t d = cache.dim();
    check_theta(mu, A, d);
    const double T = cache.horizon;

    LossValueGrad out;
    out.grad_mu = VectorXd::Constant(mu.size(), T);
    out.grad_A = cache.integrals;
    double value = mu.sum() * T + A.cwiseProduct(cache.integrals).sum();
    for (std::size_t jj = 0; jj < d; ++jj) {
        const auto j = static_cast<Eigen::Index>(jj);
        const MatrixXd& H = cache.H_at_events[jj];
        if (H.rows() == 0) continue;
        const VectorXd lambda = (H * A.row(j).transpose()).array() + mu(j);
        if (!(lambda.array() > 0.0).all()) {
            out.feasible = false;
            out.value = std::numeric_limits<double>::infinity();
            return out;
        }
        value -= lambda.array().log().sum();
        const VectorXd inv = lambda.cwiseInverse();
        out.grad_mu(j) -= inv.sum();
        out.grad_A.row(j) -= (H.transpose() * inv).transpose();
    }
    out.value = value / T;
    out.grad_mu /= T;
    out.grad_A /= T;
    return out;
}

LossValueGrad neg_log_likelihood(const ModelParams& params, const EventData& data, const MatrixXd& alpha) {
    const auto cache = build_likelihood_cache(data, alpha);
    auto out = neg_log_likelihood(params.mu, params.A, cache);
    if (!out.feasible) {
        throw InfeasiblePoint("neg_log_likelihood: zero intensity at an observed event");
    }
    return out;
}

LossOracle least_squares_oracle(PrecomputedGram gram) {
    return [gram = std::move(gram)](const VectorXd& mu, const MatrixXd& A) { return least_squares(mu, A, gram); };
}

LossOracle log_likelihood_oracle(LikelihoodCache cache) {
    return [cache = std::move(cache)](const VectorXd& mu, const MatrixXd& A) {
        return neg_log_likelihood(mu, A, cache);
    };
}

}  // namespace hawkesnet
