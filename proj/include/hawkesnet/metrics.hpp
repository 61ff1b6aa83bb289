#pragma once

#include "hawkesnet/model.hpp"
#include "hawkesnet/simulate.hpp"

#include <cstddef>

namespace hawkesnet {

struct EvalReport {
    double rel_l2_error = 0.0;
    double auc = 0.5;
    std::size_t support_size_true = 0;
    std::size_t support_size_est_at_threshold = 0;
};

/// ||theta_hat - theta||^2 / ||theta||^2 over the concatenation of mu and vec(A).
double relative_error(const VectorXd& mu_hat, const MatrixXd& A_hat, const VectorXd& mu, const MatrixXd& A);
double relative_error(const ModelParams& theta_hat, const ModelParams& theta_true);

/// Mann-Whitney AUC of the min-max scaled entries of A_hat against the
/// binary support, over all d^2 entries, ties counted 1/2.
double auc_score(const MatrixXd& A_hat, const SupportMatrix& support);

EvalReport evaluate(const VectorXd& mu_hat, const MatrixXd& A_hat, const VectorXd& mu, const MatrixXd& A,
                    const SupportMatrix& support, double threshold = 0.0);

}  // namespace hawkesnet
