#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "satcast/logdomain.hpp"
#include "satcast/solver.hpp"
#include "satcast/treetrace.hpp"

namespace satcast {

struct TreeSizeEstimate {
    double log2_size;
    // Set when the estimate is small enough to round exactly.
    std::optional<uint64_t> exact;
};

// Weighted backtrack estimator over conflict leaves. Maintains C = 2 * number
// of conflicts and the probe mass P = sum over closed left subtrees at entry
// depth d of 2^-(d+1); the tree-size estimate is C/P - 1. Mass lives in the
// base-2 log domain so branches thousands of levels deep stay finite.
class WbeEstimator {
public:
    void observe(const BackjumpSummary& s);

    // Top-level conflict: the tree is exhausted, so the mass becomes exactly
    // 1 and the estimate collapses to the exact count C - 1.
    void observe_terminal();

    void on_restart();  // a fresh tree: C and P start over

    bool has_estimate() const { return conflicts_ > 0; }
    uint64_t conflicts() const { return conflicts_; }
    double log2_mass() const { return log2_mass_; }

    TreeSizeEstimate tree_size() const;  // requires has_estimate()

private:
    uint64_t conflicts_ = 0;
    double log2_mass_ = kNegInfLog2;
};

// Direct form over the conflict-leaf depth multiset:
//   sum_d 2^-d (2^(d+1) - 1) / sum_d 2^-d.
// Independent arithmetic route used as the oracle for the incremental form;
// the two agree exactly on chronological traces.
double direct_log2_tree_size(std::span<const int> leaf_depths);

struct CostEstimate {
    double log2_total_conflicts;
    uint64_t restart_index_needed;  // first schedule index whose limit admits the remainder
};

// Projects the tree-size estimate to total conflicts for the whole run:
// completed restarts at their actual cost, upcoming restarts at their
// scheduled limits until one can hold the conflicts the current tree still
// needs (ceil((T+1)/2) leaves for T nodes). Never projects below the
// conflicts already spent.
CostEstimate estimate_total_cost(const WbeEstimator& wbe, const SolverConfig& schedule,
                                 std::span<const uint64_t> conflicts_per_restart,
                                 uint64_t current_restart);

// Schedule walk behind estimate_total_cost, exposed for direct use with a
// known remaining-conflict count.
CostEstimate project_total_cost(uint64_t conflicts_needed, const SolverConfig& schedule,
                                std::span<const uint64_t> conflicts_per_restart,
                                uint64_t current_restart);

// Refresh gate keeping estimate maintenance amortized constant per conflict:
// a new sample is due once the conflicts since the last one reach the depth
// of the last conflict leaf (at least 1).
inline bool sampling_due(uint64_t conflicts_since_last, int last_leaf_depth) {
    const uint64_t need = last_leaf_depth < 1 ? 1 : static_cast<uint64_t>(last_leaf_depth);
    return conflicts_since_last >= need;
}

}  // namespace satcast
