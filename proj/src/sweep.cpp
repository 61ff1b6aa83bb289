#include "sweep.hpp"

#include <algorithm>
#include <utility>

namespace hawkesnet::detail {

std::vector<TimeGroup> merge_events(const EventData& data) {
    std::vector<std::pair<double, std::size_t>> all;
    all.reserve(data.total_count());
    for (std::size_t k = 0; k < data.dim(); ++k) {
        for (const double t : data.node(k)) all.emplace_back(t, k);
    }
    std::sort(all.begin(), all.end());

    std::vector<TimeGroup> groups;
    for (const auto& [t, k] : all) {
        if (groups.empty() || groups.back().time != t) {
            groups.push_back(TimeGroup{t, {}});
        }
        groups.back().nodes.push_back(k);
    }
    return groups;
}

KernelState::KernelState(const MatrixXd& alpha)
    : alpha_(alpha), H_(MatrixXd::Zero(alpha.rows(), alpha.cols())) {
    if (alpha_.size() > 0) {
        rate_ = alpha_(0, 0);
        uniform_ = (alpha_.array() == rate_).all();
    }
}

void KernelState::advance(double dt) {
    if (dt <= 0.0) return;
    if (uniform_) {
        H_ *= std::exp(-rate_ * dt);
    } else {
        decay_factors(dt, scratch_);
        H_.array() *= scratch_.array();
    }
}

void KernelState::decay_factors(double dt, MatrixXd& out) const {
    if (uniform_) {
        out.setConstant(alpha_.rows(), alpha_.cols(), std::exp(-rate_ * dt));
    } else {
        out = (-alpha_.array() * dt).exp().matrix();
    }
}

}  // namespace hawkesnet::detail
