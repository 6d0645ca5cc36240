#include "satcast/pipeline.hpp"

#include <cmath>

namespace satcast {

PipelineObserver::PipelineObserver(const Formula& formula, const PipelineConfig& config)
    : config_(config),
      init_(static_stats(formula)),
      num_vars_(static_cast<uint64_t>(formula.num_vars)) {
    const DbLoadStats db = db_load_stats(formula);
    db_clauses_ = db.clauses;
    db_binary_ = db.binary;
    db_ternary_ = db.ternary;
    db_literals_ = db.literal_sum;
    if (config_.solver.restarts_enabled) {
        start_restart_window(restart_schedule(config_.solver, 0));
    } else {
        window_ = config_.fixed_window;
        window_closed_ = false;
        collector_ = WindowCollector{};
    }
}

void PipelineObserver::start_restart_window(uint64_t conflict_limit) {
    window_ = window_for_restart(conflict_limit);
    window_closed_ = false;
    collector_ = WindowCollector{};
}

std::optional<double> PipelineObserver::pb_total() const {
    const auto remaining = pbar_.estimate_remaining(tracker_.stack());
    if (!remaining) return std::nullopt;
    return static_cast<double>(overall_conflicts_) + *remaining;
}

void PipelineObserver::record_estimate() {
    const TreeSizeEstimate tree = wbe_.tree_size();
    const CostEstimate cost = estimate_total_cost(wbe_, config_.solver,
                                                  finished_restart_conflicts_, restart_index_);
    estimates_.push_back({overall_conflicts_, restart_index_, tree.log2_size,
                          cost.log2_total_conflicts, pb_total()});
}

void PipelineObserver::on_event(const SearchEvent& e) {
    if (const auto* decide = std::get_if<DecideEvent>(&e)) {
        tracker_.on_decide(decide->level);
        return;
    }
    if (const auto* conflict = std::get_if<ConflictEvent>(&e)) {
        tracker_.on_conflict();
        overall_conflicts_ += 1;
        // The learnt clause enters the database with this conflict, so the
        // conflict's own observation already sees it. Asserted units are
        // absorbed into the trail, not stored.
        if (conflict->learnt_clause_size >= 2) {
            const auto len = static_cast<uint64_t>(conflict->learnt_clause_size);
            db_clauses_ += 1;
            db_binary_ += len == 2;
            db_ternary_ += len == 3;
            db_literals_ += len;
        }
        const uint64_t idx = tracker_.conflicts_this_restart();
        const bool in_window = window_ && !window_closed_ && idx > window_->wait &&
                               idx <= window_->wait + window_->size;
        const bool closes = window_ && !window_closed_ && idx == window_->wait + window_->size;
        pending_ = PendingConflict{static_cast<uint64_t>(conflict->conflict_clause_size),
                                   static_cast<uint64_t>(conflict->learnt_clause_size),
                                   static_cast<uint64_t>(conflict->assigned_before), in_window,
                                   closes};
        return;
    }
    if (const auto* bj = std::get_if<BackjumpEvent>(&e)) {
        const BackjumpSummary summary = tracker_.on_backjump(bj->to_level);
        wbe_.observe(summary);
        pbar_.on_close(tracker_.last_close());

        const PendingConflict p = *pending_;
        pending_.reset();
        if (p.in_window) {
            collector_.observe({db_clauses_, db_binary_, db_ternary_, db_literals_, num_vars_,
                                bj->from_level, summary.leaf_depth, bj->from_level - bj->to_level,
                                p.learnt_size, p.conflict_size, p.assigned_before,
                                static_cast<uint64_t>(bj->assigned_after)});
        }

        conflicts_since_sample_ += 1;
        if (sampling_due(conflicts_since_sample_, last_sample_depth_)) {
            conflicts_since_sample_ = 0;
            last_sample_depth_ = summary.leaf_depth;
            if (config_.record_estimates) record_estimate();
            if (p.in_window) collector_.observe_log_tree_size(wbe_.tree_size().log2_size);
        }

        if (p.closes_window) {
            window_closed_ = true;
            // A window whose gate never fired still reports the estimator
            // family: sample once at the close.
            if (!collector_.has_tree_size_sample())
                collector_.observe_log_tree_size(wbe_.tree_size().log2_size);
            const auto features = collector_.finalize(init_);
            const CostEstimate cost = estimate_total_cost(
                wbe_, config_.solver, finished_restart_conflicts_, restart_index_);
            windows_.push_back({restart_index_, overall_conflicts_, *features,
                                cost.log2_total_conflicts, pb_total()});
        }
        return;
    }
    if (const auto* restart = std::get_if<RestartEvent>(&e)) {
        finished_restart_conflicts_.push_back(tracker_.conflicts_this_restart());
        restart_index_ = restart->index;
        tracker_.on_restart();
        wbe_.on_restart();
        conflicts_since_sample_ = 0;
        last_sample_depth_ = 0;
        start_restart_window(restart->conflict_limit);
        return;
    }
    if (const auto* solved = std::get_if<SolvedEvent>(&e)) {
        if (solved->status == SolveStatus::unsat && pending_) {
            // Top-level conflict: the whole tree is explored, the estimate
            // collapses to the exact node count.
            pending_.reset();
            wbe_.observe_terminal();
            if (config_.record_estimates) record_estimate();
        }
        return;
    }
    // PropagateEvent carries no tree structure.
}

PipelineResult PipelineObserver::take_result() {
    PipelineResult r;
    r.init = init_;
    r.windows = std::move(windows_);
    r.estimates = std::move(estimates_);
    return r;
}

PipelineResult run_pipeline(const Formula& formula, const PipelineConfig& config) {
    PipelineObserver observer(formula, config);
    EventObserver* obs[] = {&observer};
    SolveOutcome outcome = solve(formula, config.solver, obs);
    PipelineResult result = observer.take_result();
    result.outcome = std::move(outcome);
    return result;
}

PipelineResult replay_pipeline(const Formula& formula, std::span<const SearchEvent> events,
                               const PipelineConfig& config) {
    PipelineObserver observer(formula, config);
    SolveOutcome outcome;
    outcome.status = SolveStatus::budget_exhausted;
    uint64_t restart_local = 0;
    for (const SearchEvent& e : events) {
        observer.on_event(e);
        if (std::holds_alternative<ConflictEvent>(e)) {
            outcome.total_conflicts += 1;
            restart_local += 1;
        } else if (std::holds_alternative<DecideEvent>(e)) {
            outcome.total_decisions += 1;
        } else if (std::holds_alternative<PropagateEvent>(e)) {
            outcome.total_propagations += 1;
        } else if (std::holds_alternative<RestartEvent>(e)) {
            outcome.per_restart_conflicts.push_back(restart_local);
            restart_local = 0;
        } else if (const auto* solved = std::get_if<SolvedEvent>(&e)) {
            outcome.status = solved->status;
        }
    }
    outcome.per_restart_conflicts.push_back(restart_local);
    PipelineResult result = observer.take_result();
    result.outcome = std::move(outcome);
    return result;
}

}  // namespace satcast
