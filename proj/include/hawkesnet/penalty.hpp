#pragma once

#include "hawkesnet/features.hpp"
#include "hawkesnet/model.hpp"

namespace hawkesnet {

/// Which terms of  sum w_j mu_j + sum W_jk a_jk + tau ||A||_*  are active.
/// Nonnegativity of mu and A is always part of the domain.
struct PenaltySpec {
    PenaltyWeights weights;
    bool use_l1_mu = true;
    bool use_l1_A = true;
    bool use_trace = false;

    /// All terms switched off (projection onto the nonnegative orthant only).
    static PenaltySpec none(std::size_t d);
};

double pen_value(const VectorXd& mu, const MatrixXd& A, const PenaltySpec& spec);
double pen_value(const ModelParams& theta, const PenaltySpec& spec);

double trace_norm(const MatrixXd& A);
double operator_norm(const MatrixXd& A);

/// argmin_x  (1/2)||x - v||^2 + step * sum w_i x_i  subject to x >= 0,
/// i.e. max(v - step * w, 0) entrywise.
VectorXd prox_l1_nonneg(const VectorXd& v, const VectorXd& weights, double step);
MatrixXd prox_l1_nonneg(const MatrixXd& v, const MatrixXd& weights, double step);

/// Singular value soft-thresholding U max(S - tau_step, 0) V'.
/// Not combined with nonnegativity: the output may have negative entries.
MatrixXd prox_trace(const MatrixXd& v, double tau_step);

/// Number of singular values above 1e-12 * sigma_max.
Eigen::Index numerical_rank(const MatrixXd& m);

}  // namespace hawkesnet
