#include "hawkesnet/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hawkesnet {

ModelParams::ModelParams(VectorXd mu_, MatrixXd A_, MatrixXd alpha_)
    : mu(std::move(mu_)), A(std::move(A_)), alpha(std::move(alpha_)) {
    validate();
}

ModelParams ModelParams::with_uniform_decay(VectorXd mu, MatrixXd A, double decay) {
    const auto d = mu.size();
    return ModelParams(std::move(mu), std::move(A), MatrixXd::Constant(d, d, decay));
}

void ModelParams::validate() const {
    const auto d = mu.size();
    if (d == 0) {
        throw std::invalid_argument("ModelParams: mu must be non-empty");
    }
    if (A.rows() != d || A.cols() != d || alpha.rows() != d || alpha.cols() != d) {
        throw std::invalid_argument("ModelParams: A and alpha must be d x d with d = size(mu)");
    }
    if (!mu.allFinite() || !A.allFinite() || !alpha.allFinite()) {
        throw std::invalid_argument("ModelParams: non-finite entry");
    }
    if ((mu.array() < 0.0).any()) {
        throw std::invalid_argument("ModelParams: mu must be nonnegative");
    }
    if ((A.array() < 0.0).any()) {
        throw std::invalid_argument("ModelParams: A must be nonnegative");
    }
    if ((alpha.array() <= 0.0).any()) {
        throw std::invalid_argument("ModelParams: alpha must be positive");
    }
}

EventData::EventData(double horizon, std::vector<std::vector<double>> events)
    : horizon_(horizon), events_(std::move(events)) {
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
        throw std::invalid_argument("EventData: horizon must be positive and finite");
    }
    if (events_.empty()) {
        throw std::invalid_argument("EventData: at least one node is required");
    }
    for (std::size_t k = 0; k < events_.size(); ++k) {
        const auto& times = events_[k];
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double t = times[i];
            if (!(t > 0.0) || !(t <= horizon_)) {
                std::ostringstream msg;
                msg << "EventData: node " << k << " has timestamp " << t << " outside (0, " << horizon_ << "]";
                throw std::invalid_argument(msg.str());
            }
            if (i > 0 && !(times[i - 1] < t)) {
                std::ostringstream msg;
                msg << "EventData: node " << k << " timestamps not strictly increasing at index " << i;
                throw std::invalid_argument(msg.str());
            }
        }
    }
}

EventData EventData::empty(std::size_t d, double horizon) {
    return EventData(horizon, std::vector<std::vector<double>>(d));
}

std::size_t EventData::total_count() const {
    std::size_t n = 0;
    for (const auto& e : events_) n += e.size();
    return n;
}

EventData EventData::truncate(double new_horizon) const {
    std::vector<std::vector<double>> out(events_.size());
    for (std::size_t k = 0; k < events_.size(); ++k) {
        const auto& times = events_[k];
        const auto end = std::upper_bound(times.begin(), times.end(), new_horizon);
        out[k].assign(times.begin(), end);
    }
    return EventData(new_horizon, std::move(out));
}

EventData EventData::window_after(double start) const {
    if (!(start >= 0.0) || !(start < horizon_)) {
        throw std::invalid_argument("EventData::window_after: start must lie in [0, T)");
    }
    std::vector<std::vector<double>> out(events_.size());
    for (std::size_t k = 0; k < events_.size(); ++k) {
        const auto& times = events_[k];
        for (auto it = std::upper_bound(times.begin(), times.end(), start); it != times.end(); ++it) {
            const double shifted = *it - start;
            // Rebasing can round a tiny offset to zero or collapse neighbours.
            if (shifted > 0.0 && (out[k].empty() || out[k].back() < shifted)) {
                out[k].push_back(shifted);
            }
        }
    }
    return EventData(horizon_ - start, std::move(out));
}

namespace {

void check_compatible(const ModelParams& params, const EventData& data, std::size_t node) {
    if (params.dim() != data.dim()) {
        throw std::invalid_argument("dimension mismatch between parameters and events");
    }
    if (node >= data.dim()) {
        throw std::out_of_range("node index out of range");
    }
}

}  // namespace

double intensity_at(const ModelParams& params, const EventData& data, std::size_t node, double t) {
    check_compatible(params, data, node);
    if (!(t >= 0.0) || !(t <= data.horizon())) {
        throw std::out_of_range("intensity_at: t outside the observation window");
    }
    double value = params.mu(node);
    for (std::size_t k = 0; k < data.dim(); ++k) {
        const double a = params.A(node, k);
        if (a == 0.0) continue;
        const double decay = params.alpha(node, k);
        // g tracks sum_{t_i < t} exp(-decay (last - t_i)) at the last event seen.
        double g = 0.0;
        double last = 0.0;
        for (const double s : data.node(k)) {
            if (!(s < t)) break;
            g = g * std::exp(-decay * (s - last)) + 1.0;
            last = s;
        }
        value += a * g * std::exp(-decay * (t - last));
    }
    return value;
}

IntensityTrace intensity_trace(const ModelParams& params, const EventData& data, std::size_t node,
                               std::vector<double> sample_times) {
    check_compatible(params, data, node);
    if (!std::is_sorted(sample_times.begin(), sample_times.end())) {
        throw std::invalid_argument("intensity_trace: sample times must be increasing");
    }
    if (!sample_times.empty() && (sample_times.front() < 0.0 || sample_times.back() > data.horizon())) {
        throw std::out_of_range("intensity_trace: sample time outside the observation window");
    }
    const std::size_t d = data.dim();
    std::vector<double> state(d, 0.0);
    std::vector<double> last(d, 0.0);
    std::vector<std::size_t> cursor(d, 0);

    IntensityTrace trace;
    trace.node = node;
    trace.values.reserve(sample_times.size());
    for (const double t : sample_times) {
        double value = params.mu(node);
        for (std::size_t k = 0; k < d; ++k) {
            const double decay = params.alpha(node, k);
            const auto& times = data.node(k);
            while (cursor[k] < times.size() && times[cursor[k]] < t) {
                const double s = times[cursor[k]++];
                state[k] = state[k] * std::exp(-decay * (s - last[k])) + 1.0;
                last[k] = s;
            }
            value += params.A(node, k) * state[k] * std::exp(-decay * (t - last[k]));
        }
        trace.values.push_back(value);
    }
    trace.sample_times = std::move(sample_times);
    return trace;
}

MatrixXd branching_matrix(const ModelParams& params) {
    return params.A.cwiseQuotient(params.alpha);
}

double spectral_radius(const MatrixXd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::EigenSolver<MatrixXd> solver(m, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

VectorXd mean_stationary_intensity(const ModelParams& params) {
    const MatrixXd K = branching_matrix(params);
    const double rho = spectral_radius(K);
    if (!(rho < 1.0)) {
        std::ostringstream msg;
        msg << "non-stationary parameters: spectral radius of the branching matrix is " << rho;
        throw std::domain_error(msg.str());
    }
    const auto d = K.rows();
    return (MatrixXd::Identity(d, d) - K).partialPivLu().solve(params.mu);
}

}  // namespace hawkesnet
