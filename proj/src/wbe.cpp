#include "satcast/wbe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace satcast {

void WbeEstimator::observe(const BackjumpSummary& summary) {
    conflicts_ += 1;
    // A closed entry popped on the way down surrenders its left-subtree mass;
    // the entry closed at the target contributes the mass of the subtree the
    // jump just completed.
    for (int depth : summary.popped_closed_depths) {
        log2_mass_ = log2_sub(log2_mass_, -static_cast<double>(depth + 1));
    }
    log2_mass_ = log2_add(log2_mass_, -static_cast<double>(summary.target_depth + 1));
}

void WbeEstimator::observe_terminal() {
    conflicts_ += 1;
    log2_mass_ = 0.0;  // the whole tree is explored: P = 1 exactly
}

void WbeEstimator::on_restart() {
    conflicts_ = 0;
    log2_mass_ = kNegInfLog2;
}

TreeSizeEstimate WbeEstimator::tree_size() const {
    if (!has_estimate()) throw std::logic_error("tree size queried before any completed branch");
    TreeSizeEstimate est;
    const double log2_ratio = std::log2(2.0 * static_cast<double>(conflicts_)) - log2_mass_;
    if (log2_ratio < 52.0) {
        // Small enough that C/P - 1 is exact in double arithmetic.
        const double value = std::exp2(log2_ratio) - 1.0;
        est.log2_size = std::log2(value);
        est.exact = static_cast<uint64_t>(std::llround(value));
    } else {
        est.log2_size = log2_ratio;  // the -1 is below representable precision
    }
    return est;
}

double direct_log2_tree_size(std::span<const int> closed_depths) {
    if (closed_depths.empty()) throw std::logic_error("direct estimate needs at least one closed branch");
    // sum over d of 2^-d (2^(d+1) - 1)  over  sum over d of 2^-d
    double log2_num = kNegInfLog2;
    double log2_den = kNegInfLog2;
    for (int d : closed_depths) {
        const double dd = static_cast<double>(d);
        log2_num = log2_add(log2_num, log2_sub(dd + 1.0, 0.0) - dd);
        log2_den = log2_add(log2_den, -dd);
    }
    return log2_num - log2_den;
}

namespace {

CostEstimate walk_schedule(std::optional<uint64_t> need_exact, double log2_need,
                           const SolverConfig& schedule,
                           std::span<const uint64_t> conflicts_per_restart,
                           uint64_t current_restart) {
    // Conflicts already paid in completed restarts (the current one is charged
    // at its projected size, not its partial count).
    double log2_past = kNegInfLog2;
    for (uint64_t i = 0; i < current_restart && i < conflicts_per_restart.size(); ++i) {
        if (conflicts_per_restart[i] > 0)
            log2_past = log2_add(log2_past, std::log2(static_cast<double>(conflicts_per_restart[i])));
    }

    // Walk forward until a restart can hold the remainder. Terminates for any
    // factor > 1 because the schedule saturates to kUnlimited near 2^63.
    uint64_t m = current_restart;
    double log2_future = kNegInfLog2;  // limits of restarts current..m-1 (abandoned attempts)
    for (;; ++m) {
        const uint64_t limit = restart_schedule(schedule, m);
        const bool covered =
            limit == kUnlimited ||
            (need_exact ? *need_exact <= limit
                        : log2_need <= std::log2(static_cast<double>(limit)));
        if (covered) break;
        log2_future = log2_add(log2_future, std::log2(static_cast<double>(limit)));
    }

    CostEstimate est;
    est.restart_index_needed = m;
    est.log2_total_conflicts = log2_add(log2_add(log2_past, log2_future), log2_need);
    return est;
}

}  // namespace

CostEstimate project_total_cost(uint64_t conflicts_needed, const SolverConfig& schedule,
                                std::span<const uint64_t> conflicts_per_restart,
                                uint64_t current_restart) {
    if (conflicts_needed == 0) conflicts_needed = 1;
    return walk_schedule(conflicts_needed, std::log2(static_cast<double>(conflicts_needed)),
                         schedule, conflicts_per_restart, current_restart);
}

CostEstimate estimate_total_cost(const WbeEstimator& wbe, const SolverConfig& schedule,
                                 std::span<const uint64_t> conflicts_per_restart,
                                 uint64_t current_restart) {
    if (!wbe.has_estimate()) throw std::logic_error("cost projection queried before any completed branch");
    const double log2_ratio =
        std::log2(2.0 * static_cast<double>(wbe.conflicts())) - wbe.log2_mass();

    // Leaves of a proper binary tree with T = C/P - 1 nodes: (T+1)/2 = C/(2P).
    std::optional<uint64_t> need_exact;
    double log2_need;
    if (log2_ratio < 52.0) {
        const double leaves = (std::exp2(log2_ratio) - 1.0 + 1.0) / 2.0;
        uint64_t need = static_cast<uint64_t>(std::ceil(leaves - 1e-9));
        need = std::max<uint64_t>({need, 1, wbe.conflicts()});
        need_exact = need;
        log2_need = std::log2(static_cast<double>(need));
    } else {
        log2_need = log2_ratio - 1.0;
    }
    return walk_schedule(need_exact, log2_need, schedule, conflicts_per_restart, current_restart);
}

}  // namespace satcast
