#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace hawkesnet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Parameters of a multivariate Hawkes process with exponential kernels
/// h_{j,k}(t) = exp(-alpha_{j,k} t). The intensity of node j is
///   mu_j + sum_k A(j,k) * sum_{t_{k,i} < t} exp(-alpha(j,k) (t - t_{k,i})).
/// The kernel carries no leading alpha factor, so the integrated mass of
/// pair (j,k) is A(j,k) / alpha(j,k).
struct ModelParams {
    VectorXd mu;
    MatrixXd A;
    MatrixXd alpha;

    ModelParams() = default;
    ModelParams(VectorXd mu_, MatrixXd A_, MatrixXd alpha_);

    /// Uniform decay rate for every pair.
    static ModelParams with_uniform_decay(VectorXd mu, MatrixXd A, double decay);

    std::size_t dim() const { return static_cast<std::size_t>(mu.size()); }

    /// Throws std::invalid_argument on a sign or shape violation.
    void validate() const;
};

/// Per-node event timestamps on the window [0, T].
class EventData {
public:
    EventData() = default;
    /// Validates: every list strictly increasing, all times in (0, T].
    EventData(double horizon, std::vector<std::vector<double>> events);

    /// d nodes with no events.
    static EventData empty(std::size_t d, double horizon);

    std::size_t dim() const { return events_.size(); }
    double horizon() const { return horizon_; }
    const std::vector<double>& node(std::size_t k) const { return events_.at(k); }
    const std::vector<std::vector<double>>& events() const { return events_; }
    std::size_t count(std::size_t k) const { return events_.at(k).size(); }
    std::size_t total_count() const;

    /// Events with time <= new_horizon, on the window [0, new_horizon].
    EventData truncate(double new_horizon) const;

    /// Events in (start, horizon], shifted by -start. The returned window
    /// has length horizon - start and carries no history from before start.
    EventData window_after(double start) const;

    bool operator==(const EventData& other) const = default;

private:
    double horizon_ = 0.0;
    std::vector<std::vector<double>> events_;
};

struct IntensityTrace {
    std::size_t node = 0;
    std::vector<double> sample_times;
    std::vector<double> values;
};

/// lambda_node(t), counting only events strictly before t.
double intensity_at(const ModelParams& params, const EventData& data, std::size_t node, double t);

/// lambda_node at each of the increasing sample_times in one left-to-right pass.
IntensityTrace intensity_trace(const ModelParams& params, const EventData& data, std::size_t node,
                               std::vector<double> sample_times);

/// K(j,k) = A(j,k) / alpha(j,k).
MatrixXd branching_matrix(const ModelParams& params);

double spectral_radius(const MatrixXd& m);

/// Solution m of (I - K) m = mu. Throws std::domain_error when the spectral
/// radius of K is >= 1.
VectorXd mean_stationary_intensity(const ModelParams& params);

}  // namespace hawkesnet
