#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "satcast/cnf.hpp"

namespace satcast {

inline constexpr uint64_t kUnlimited = std::numeric_limits<uint64_t>::max();

enum class SolveStatus { sat, unsat, budget_exhausted };

struct SolverConfig {
    bool restarts_enabled = true;
    uint64_t restart_base = 100;
    double restart_factor = 1.5;
    double var_decay = 0.95;
    // Learnt-clause cap; the effective cap is max(clause_db_cap, stored
    // original clauses). kUnlimited disables deletion.
    uint64_t clause_db_cap = 0;
    bool polarity_default = false;
    // Recorded in run metadata but unused: the search itself is fully
    // deterministic (VSIDS ties break toward the lowest variable index).
    uint64_t seed = 0;
    uint64_t conflict_budget = kUnlimited;
};

// Scheduled conflict limit of restart `index`: round(base * factor^index),
// saturating at kUnlimited; kUnlimited whenever restarts are disabled.
uint64_t restart_schedule(const SolverConfig& cfg, uint64_t index);

void validate(const SolverConfig& cfg);  // throws std::invalid_argument

// Events, in emission order per conflict: Conflict, Backjump, Propagate of
// the asserted literal, then Restart if the limit was reached. A top-level
// conflict emits Conflict followed by Solved{unsat}. Literal fields use the
// signed DIMACS convention.
struct DecideEvent {
    int level;  // == previous decision level + 1
    int lit;
};
struct PropagateEvent {
    int level;
    int lit;
};
struct ConflictEvent {
    int conflict_clause_size;
    int learnt_clause_size;  // 0 at a top-level conflict
    int assigned_before;     // trail size when the conflict was detected
};
struct BackjumpEvent {
    int from_level;
    int to_level;        // < from_level
    int assigned_after;  // trail size after unwinding, before asserting
};
struct RestartEvent {
    uint64_t index;           // >= 1; the run begins in restart 0 implicitly
    uint64_t conflict_limit;  // scheduled limit of the new restart
};
struct SolvedEvent {
    SolveStatus status;  // sat or unsat; budget exhaustion emits no Solved
};

using SearchEvent =
    std::variant<DecideEvent, PropagateEvent, ConflictEvent, BackjumpEvent, RestartEvent, SolvedEvent>;

class EventObserver {
public:
    virtual ~EventObserver() = default;
    virtual void on_event(const SearchEvent& e) = 0;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::budget_exhausted;
    uint64_t total_conflicts = 0;
    uint64_t total_decisions = 0;
    uint64_t total_propagations = 0;
    // One entry per restart, in order; sums to total_conflicts.
    std::vector<uint64_t> per_restart_conflicts;
    std::vector<bool> model;  // model[v-1] for variable v; empty unless sat
};

// One-shot CDCL solve: watched literals, first-UIP learning, conflict-driven
// backjumping, VSIDS, geometric restarts, activity-based learnt eviction.
// Same formula + config always yields the identical event stream and outcome.
SolveOutcome solve(const Formula& f, const SolverConfig& cfg,
                   std::span<EventObserver* const> observers = {});

// The clause database as stored after loading: duplicate literals removed,
// tautologies dropped, units absorbed into assignments. Pure function of the
// formula, so offline consumers reproduce it without re-solving. Matches the
// solver's own load exactly (tested).
struct DbLoadStats {
    uint64_t clauses = 0;
    uint64_t binary = 0;
    uint64_t ternary = 0;
    uint64_t literal_sum = 0;
};
DbLoadStats db_load_stats(const Formula& f);

}  // namespace satcast
