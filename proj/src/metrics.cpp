#include "hawkesnet/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hawkesnet {

double relative_error(const VectorXd& mu_hat, const MatrixXd& A_hat, const VectorXd& mu, const MatrixXd& A) {
    if (mu_hat.size() != mu.size() || A_hat.rows() != A.rows() || A_hat.cols() != A.cols()) {
        throw std::invalid_argument("relative_error: dimension mismatch");
    }
    const double denom = mu.squaredNorm() + A.squaredNorm();
    if (!(denom > 0.0)) throw std::invalid_argument("relative_error: true parameter is zero");
    return ((mu_hat - mu).squaredNorm() + (A_hat - A).squaredNorm()) / denom;
}

double relative_error(const ModelParams& theta_hat, const ModelParams& theta_true) {
    return relative_error(theta_hat.mu, theta_hat.A, theta_true.mu, theta_true.A);
}

double auc_score(const MatrixXd& A_hat, const SupportMatrix& support) {
    if (A_hat.rows() != support.rows() || A_hat.cols() != support.cols()) {
        throw std::invalid_argument("auc_score: shape mismatch");
    }
    const auto n_pos = static_cast<double>(support.count());
    const auto n_neg = static_cast<double>(support.size()) - n_pos;
    if (n_pos == 0.0 || n_neg == 0.0) {
        throw std::invalid_argument("auc_score: ground truth needs both positive and negative entries");
    }
    const double lo = A_hat.minCoeff();
    const double hi = A_hat.maxCoeff();
    if (!(hi > lo)) return 0.5;
    const MatrixXd scaled = (A_hat.array() - lo) / (hi - lo);

    // Average ranks over ties, then the rank-sum form of Mann-Whitney.
    const auto size = static_cast<std::size_t>(scaled.size());
    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scaled.data()[a] < scaled.data()[b]; });
    double pos_rank_sum = 0.0;
    for (std::size_t i = 0; i < size;) {
        std::size_t j = i;
        while (j < size && scaled.data()[order[j]] == scaled.data()[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t m = i; m < j; ++m) {
            if (support.data()[order[m]]) pos_rank_sum += avg_rank;
        }
        i = j;
    }
    return (pos_rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

EvalReport evaluate(const VectorXd& mu_hat, const MatrixXd& A_hat, const VectorXd& mu, const MatrixXd& A,
                    const SupportMatrix& support, double threshold) {
    EvalReport report;
    report.rel_l2_error = relative_error(mu_hat, A_hat, mu, A);
    report.auc = auc_score(A_hat, support);
    report.support_size_true = static_cast<std::size_t>(support.count());
    report.support_size_est_at_threshold = static_cast<std::size_t>((A_hat.array() > threshold).count());
    return report;
}

}  // namespace hawkesnet
