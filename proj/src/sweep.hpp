#pragma once

// Internal helpers shared by the left-to-right event sweeps.

#include "hawkesnet/model.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace hawkesnet::detail {

/// All events sharing one timestamp. Nodes are listed in ascending order.
struct TimeGroup {
    double time;
    std::vector<std::size_t> nodes;
};

std::vector<TimeGroup> merge_events(const EventData& data);

/// Running state H(j,k) = sum_{t_{k,i} < now} exp(-alpha(j,k) (now - t_{k,i})).
class KernelState {
public:
    explicit KernelState(const MatrixXd& alpha);

    void advance(double dt);
    /// Right-limit update after an event of node k.
    void jump(std::size_t k) { H_.col(static_cast<Eigen::Index>(k)).array() += 1.0; }

    /// exp(-alpha * dt) entrywise.
    void decay_factors(double dt, MatrixXd& out) const;

    const MatrixXd& H() const { return H_; }
    const MatrixXd& alpha() const { return alpha_; }
    bool uniform() const { return uniform_; }
    double uniform_rate() const { return rate_; }

private:
    MatrixXd alpha_;
    MatrixXd H_;
    MatrixXd scratch_;
    bool uniform_ = false;
    double rate_ = 0.0;
};

}  // namespace hawkesnet::detail
