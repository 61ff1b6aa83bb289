#pragma once

#include "hawkesnet/model.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hawkesnet {

/// Observable statistics of the event data, with
///   H(j,k)(t) = sum_{t_{k,i} < t} exp(-alpha(j,k) (t - t_{k,i})).
struct FeatureStats {
    double horizon = 0.0;
    /// H_at_events[j] is count(j) x d; row i holds H(j, .)(t_{j,i}-).
    std::vector<MatrixXd> H_at_events;
    /// Running supremum of H(j,k)(s) over s in [0, T].
    MatrixXd B;
    /// (1/T) sum over events of j of H(j,k)(t-)^2.
    MatrixXd Vhat;
    /// Diagonal of V1: (1/T) sum over events of j of ||H(t-)||_{2,inf}^2.
    VectorXd Vhat1;
    /// Symmetric PSD.
    MatrixXd Vhat2;
    /// sup over s in [0, T] of ||H(s)||_{2,inf} (maximum row l2 norm).
    double sup_H_2inf = 0.0;
    VectorXd node_counts;

    std::size_t dim() const { return static_cast<std::size_t>(node_counts.size()); }
};

enum class WeightMode { theoretical, practical };

struct PenaltyWeights {
    VectorXd w;
    MatrixXd W;
    double tau = 0.0;
    double x = 0.0;
    WeightMode mode = WeightMode::theoretical;
    double c1 = 0.0;
    double c2 = 0.0;
};

std::string to_string(WeightMode mode);

FeatureStats compute_stats(const EventData& data, const MatrixXd& alpha);

/// Iterated-logarithm corrections, natural logs, with the `v e` clamp.
namespace loglog_terms {
/// 2 log log(max((6 N + 56 x) / (112 x), e))
double node(double count, double x);
/// 2 log log(max((6 T V + 56 x B^2) / (112 x B^2), e)); 0 when B == 0.
double pair(double horizon, double vhat, double b, double x);
/// Sum of the three operator-norm terms built from ||V1||, ||V2|| and sup ||H||_{2,inf}.
double opnorm(double v1_op, double v2_op, double sup_h, double x);
}  // namespace loglog_terms

/// Weights with the exact confidence-level constants and iterated-log terms.
PenaltyWeights theoretical_weights(const FeatureStats& stats, double x, std::size_t d, double horizon);

/// Simplified weights with x = log T and the log log terms dropped:
///   w_j = c1 sqrt((log T + log d) N_j / T^2),  W_jk = c2 sqrt((log T + log d) Vhat_jk / T).
/// tau is left at zero; callers supply it.
PenaltyWeights practical_weights(const FeatureStats& stats, double c1, double c2, std::size_t d, double horizon);

/// max(||V1||_op, ||V2||_op).
double variance_opnorm(const FeatureStats& stats);

}  // namespace hawkesnet
