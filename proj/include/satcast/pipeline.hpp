#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "satcast/cnf.hpp"
#include "satcast/features.hpp"
#include "satcast/pbar.hpp"
#include "satcast/solver.hpp"
#include "satcast/treetrace.hpp"
#include "satcast/wbe.hpp"

namespace satcast {

struct PipelineConfig {
    SolverConfig solver;
    // Window placement when restarts are disabled (the schedule then offers no
    // conflict limit to derive one from). Ignored when restarts are enabled.
    std::optional<WindowConfig> fixed_window;
    bool record_estimates = true;
};

// One gated sample of the online estimators.
struct EstimatePoint {
    uint64_t conflict_index;  // overall, 1-based
    uint64_t restart_index;
    double log2_tree_size;
    double log2_total_cost;
    // Progress-bar projection: conflicts spent overall plus the per-depth
    // average of what the current tree still owes. Empty until every open
    // depth has history.
    std::optional<double> pb_total;
};

// A closed observation window and the predictions available at that moment.
struct WindowResult {
    uint64_t restart_index;
    uint64_t closed_at_conflict;  // overall conflict index
    FeatureVector features;
    double log2_wbe_total;
    std::optional<double> pb_total;
};

struct PipelineResult {
    SolveOutcome outcome;
    FormulaStats init;
    std::vector<WindowResult> windows;
    std::vector<EstimatePoint> estimates;
};

// Feeds solver events through the branch tracker, the tree-size/cost
// estimators, the progress-bar baseline and the per-restart observation
// windows. The same observer serves the live solver and recorded-trace
// replays, so the two modes cannot diverge.
class PipelineObserver : public EventObserver {
public:
    PipelineObserver(const Formula& formula, const PipelineConfig& config);

    void on_event(const SearchEvent& e) override;

    // Windows and estimates collected so far; outcome left default.
    PipelineResult take_result();

private:
    void start_restart_window(uint64_t conflict_limit);
    void record_estimate();
    std::optional<double> pb_total() const;

    PipelineConfig config_;
    FormulaStats init_;
    uint64_t num_vars_;

    // Live clause DB: load-time contents plus learnt additions.
    uint64_t db_clauses_, db_binary_, db_ternary_, db_literals_;

    BranchTracker tracker_;
    WbeEstimator wbe_;
    PbarEstimator pbar_;

    uint64_t overall_conflicts_ = 0;
    uint64_t restart_index_ = 0;
    std::vector<uint64_t> finished_restart_conflicts_;

    // Sampling gate for estimate maintenance.
    uint64_t conflicts_since_sample_ = 0;
    int last_sample_depth_ = 0;

    std::optional<WindowConfig> window_;
    WindowCollector collector_;
    bool window_closed_ = false;

    struct PendingConflict {
        uint64_t conflict_size;
        uint64_t learnt_size;
        uint64_t assigned_before;
        bool in_window;
        bool closes_window;
    };
    std::optional<PendingConflict> pending_;

    std::vector<WindowResult> windows_;
    std::vector<EstimatePoint> estimates_;
};

// Solves the formula while extracting windows and estimate streams.
PipelineResult run_pipeline(const Formula& formula, const PipelineConfig& config);

// Extracts the same streams from a recorded event sequence. The outcome is
// reconstructed from the events (budget-exhausted runs have no Solved event).
PipelineResult replay_pipeline(const Formula& formula, std::span<const SearchEvent> events,
                               const PipelineConfig& config);

}  // namespace satcast
