#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "satcast/treetrace.hpp"

namespace satcast {

// Progress-bar baseline: per-depth exponential means of completed subtree
// sizes, queried over the open entries of the current branch. An entry at
// depth d still owes its right subtree, whose root sits at depth d+1; a close
// at depth d reports exactly such a subtree, so both sides key on the entry
// depth. No estimate is available until every open depth has history.
class PbarEstimator {
public:
    explicit PbarEstimator(double alpha = 0.5) : alpha_(alpha) {}

    void on_close(const SubtreeClose& c);

    // Conflicts still to spend in the current tree. Empty branch means the
    // tree is complete: 0 remains.
    std::optional<double> estimate_remaining(const std::vector<BranchEntry>& branch) const;

private:
    double alpha_;
    std::unordered_map<int, double> mean_by_depth_;
};

}  // namespace satcast
