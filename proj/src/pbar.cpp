#include "satcast/pbar.hpp"

namespace satcast {

void PbarEstimator::on_close(const SubtreeClose& c) {
    auto [it, fresh] = mean_by_depth_.try_emplace(c.depth, static_cast<double>(c.left_subtree_conflicts));
    if (!fresh) it->second = (1.0 - alpha_) * it->second + alpha_ * static_cast<double>(c.left_subtree_conflicts);
}

std::optional<double> PbarEstimator::estimate_remaining(const std::vector<BranchEntry>& branch) const {
    double remaining = 0.0;
    for (size_t depth = 0; depth < branch.size(); ++depth) {
        if (branch[depth].closed) continue;
        const auto it = mean_by_depth_.find(static_cast<int>(depth));
        if (it == mean_by_depth_.end()) return std::nullopt;
        remaining += it->second;
    }
    return remaining;
}

}  // namespace satcast
