#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "satcast/cnf.hpp"
#include "satcast/features.hpp"
#include "satcast/lmp.hpp"
#include "satcast/solver.hpp"

namespace satcast {

// Two solver configurations racing on one instance, each queried at its own
// restart. Defaults follow the workbench's standard schedules: a faster-
// growing schedule queried early, a slower one queried late.
struct RaceConfig {
    SolverConfig solver_a{.restart_factor = 1.5};
    SolverConfig solver_b{.restart_factor = 1.2};
    uint64_t query_restart_a = 9;
    uint64_t query_restart_b = 19;
};

// Evaluation-mode measurement: both runs solved to completion, query windows
// recorded where reached. Costs are conflicts.
struct RaceObservation {
    std::string instance_id;
    bool sat = false;  // meaningful when either run solved
    SolveStatus status_a = SolveStatus::budget_exhausted;
    SolveStatus status_b = SolveStatus::budget_exhausted;
    uint64_t cost_a = 0;
    uint64_t cost_b = 0;
    std::optional<uint64_t> query_a, query_b;  // overall conflict index at window close
    std::optional<FeatureVector> features_a, features_b;
};

RaceObservation observe_race(const Formula& f, const std::string& instance_id,
                             const RaceConfig& cfg);

enum class RaceStrategy { oracle_best, lmp_oracle, lmp_avg };

std::string_view to_string(RaceStrategy s);

struct RaceDecision {
    bool undecided = false;  // neither a window nor a solve within budget
    char chosen = 'a';
    uint64_t cost_chosen = 0;
    uint64_t decision_point = 0;  // conflicts on the synchronized clock
    uint64_t loser_charge = 0;    // parallel conflicts burned by the terminated run
    bool by_solve = false;        // a run finished before the decision point
    std::optional<double> pred_a, pred_b;  // log domain, when predictions were consulted
};

// Applies one selection strategy to a measured race. A run solving before the
// later of the two query points wins immediately; otherwise the predicted-
// cheaper run survives. The oracle strategy selects min-cost with no overhead.
RaceDecision decide_race(const RaceObservation& obs, const LmpModelPair& models_a,
                         const LmpModelPair& models_b, RaceStrategy strategy);

struct RaceTally {
    double baseline_total = 0.0;  // sum of per-instance (cost_a + cost_b)/2
    double oracle_total = 0.0;    // sum of per-instance min(cost_a, cost_b)
    double total_without = 0.0;   // survivor's own conflicts
    double total_with = 0.0;      // plus the loser's pre-decision conflicts
    size_t decided = 0;
    size_t by_solve = 0;
    size_t undecided = 0;
};

RaceTally tally(std::span<const RaceObservation> observations, const LmpModelPair& models_a,
                const LmpModelPair& models_b, RaceStrategy strategy);

// Percentage improvement of a strategy's total over the two-solver average.
double improvement_pct(double baseline_total, double strategy_total);

}  // namespace satcast
