#include "hawkesnet/penalty.hpp"

#include <Eigen/SVD>

#include <stdexcept>

namespace hawkesnet {

PenaltySpec PenaltySpec::none(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    PenaltySpec spec;
    spec.weights.w = VectorXd::Zero(n);
    spec.weights.W = MatrixXd::Zero(n, n);
    spec.use_l1_mu = false;
    spec.use_l1_A = false;
    spec.use_trace = false;
    return spec;
}

double trace_norm(const MatrixXd& A) {
    if (A.size() == 0) return 0.0;
    Eigen::BDCSVD<MatrixXd> svd(A);
    return svd.singularValues().sum();
}

double operator_norm(const MatrixXd& A) {
    if (A.size() == 0) return 0.0;
    Eigen::BDCSVD<MatrixXd> svd(A);
    return svd.singularValues()(0);
}

double pen_value(const VectorXd& mu, const MatrixXd& A, const PenaltySpec& spec) {
    double value = 0.0;
    if (spec.use_l1_mu) value += spec.weights.w.dot(mu.cwiseAbs());
    if (spec.use_l1_A) value += spec.weights.W.cwiseProduct(A.cwiseAbs()).sum();
    if (spec.use_trace && spec.weights.tau != 0.0) value += spec.weights.tau * trace_norm(A);
    return value;
}

double pen_value(const ModelParams& theta, const PenaltySpec& spec) {
    return pen_value(theta.mu, theta.A, spec);
}

VectorXd prox_l1_nonneg(const VectorXd& v, const VectorXd& weights, double step) {
    if (v.size() != weights.size()) throw std::invalid_argument("prox_l1_nonneg: shape mismatch");
    return (v - step * weights).cwiseMax(0.0);
}

MatrixXd prox_l1_nonneg(const MatrixXd& v, const MatrixXd& weights, double step) {
    if (v.rows() != weights.rows() || v.cols() != weights.cols()) {
        throw std::invalid_argument("prox_l1_nonneg: shape mismatch");
    }
    return (v - step * weights).cwiseMax(0.0);
}

MatrixXd prox_trace(const MatrixXd& v, double tau_step) {
    if (!v.allFinite()) throw std::invalid_argument("prox_trace: non-finite input");
    if (tau_step < 0.0) throw std::invalid_argument("prox_trace: negative threshold");
    if (tau_step == 0.0 || v.size() == 0) return v;
    Eigen::BDCSVD<MatrixXd> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXd shrunk = (svd.singularValues().array() - tau_step).cwiseMax(0.0).matrix();
    const auto r = shrunk.size();
    return svd.matrixU().leftCols(r) * shrunk.asDiagonal() * svd.matrixV().leftCols(r).transpose();
}

Eigen::Index numerical_rank(const MatrixXd& m) {
    if (m.size() == 0) return 0;
    Eigen::BDCSVD<MatrixXd> svd(m);
    const VectorXd& s = svd.singularValues();
    if (s(0) == 0.0) return 0;
    return (s.array() > 1e-12 * s(0)).count();
}

}  // namespace hawkesnet
