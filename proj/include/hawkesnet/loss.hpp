#pragma once

#include "hawkesnet/features.hpp"
#include "hawkesnet/model.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace hawkesnet {

/// theta-independent integrals behind the least-squares objective, all
/// computed in closed form for exponential kernels.
struct PrecomputedGram {
    double horizon = 0.0;
    /// psi(j,k) = (1/T) int_0^T H(j,k)(t) dt
    MatrixXd psi;
    /// G[j](k,k') = (1/T) int_0^T H(j,k)(t) H(j,k')(t) dt
    std::vector<MatrixXd> G;
    /// S(j,k) = (1/T) sum over events of j of H(j,k)(t-)
    MatrixXd S;
    VectorXd counts;

    std::size_t dim() const { return static_cast<std::size_t>(counts.size()); }
};

struct LossValueGrad {
    double value = 0.0;
    VectorXd grad_mu;
    MatrixXd grad_A;
    /// False when some event has nonpositive intensity (log-likelihood only);
    /// value is then +inf and the gradient is undefined.
    bool feasible = true;
};

/// Raised when the log-likelihood is evaluated where an event has zero intensity.
class InfeasiblePoint : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

PrecomputedGram precompute_gram(const EventData& data, const MatrixXd& alpha);

/// Least-squares contrast
///   sum_j mu_j^2 + 2 mu_j <a_j, psi_j> + a_j' G_j a_j - (2/T)(mu_j N_j + T <a_j, S_j>)
/// with its exact gradient. Only mu and A of `params` are read.
LossValueGrad least_squares(const VectorXd& mu, const MatrixXd& A, const PrecomputedGram& gram);
LossValueGrad least_squares(const ModelParams& params, const PrecomputedGram& gram);

/// Cached pieces of the negative log-likelihood: left-limits H(j, .)(t-) at
/// every event of j and the compensator integrals int_0^T H(j,k).
struct LikelihoodCache {
    double horizon = 0.0;
    std::vector<MatrixXd> H_at_events;
    MatrixXd integrals;
    VectorXd counts;

    std::size_t dim() const { return static_cast<std::size_t>(counts.size()); }
};

LikelihoodCache build_likelihood_cache(const EventData& data, const MatrixXd& alpha);
LikelihoodCache build_likelihood_cache(const FeatureStats& stats, const EventData& data, const MatrixXd& alpha);

/// -(1/T) sum_j [ sum_i log lambda_j(t_{j,i}-) - int_0^T lambda_j ].
/// Returns feasible == false and value == +inf instead of throwing.
LossValueGrad neg_log_likelihood(const VectorXd& mu, const MatrixXd& A, const LikelihoodCache& cache);

/// Throws InfeasiblePoint when some event has nonpositive intensity.
LossValueGrad neg_log_likelihood(const ModelParams& params, const EventData& data, const MatrixXd& alpha);

/// Smooth loss evaluated by the solvers.
using LossOracle = std::function<LossValueGrad(const VectorXd& mu, const MatrixXd& A)>;

LossOracle least_squares_oracle(PrecomputedGram gram);
LossOracle log_likelihood_oracle(LikelihoodCache cache);

}  // namespace hawkesnet
