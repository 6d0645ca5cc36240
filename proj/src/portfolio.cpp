#include "satcast/portfolio.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "satcast/pipeline.hpp"

namespace satcast {

std::string_view to_string(RaceStrategy s) {
    switch (s) {
        case RaceStrategy::oracle_best: return "oracle";
        case RaceStrategy::lmp_oracle: return "lmp-oracle";
        case RaceStrategy::lmp_avg: return "lmp-avg";
    }
    return "?";
}

namespace {

struct RunView {
    SolveStatus status;
    uint64_t cost;
    std::optional<uint64_t> query;
    const std::optional<FeatureVector>* features;
};

void fill_run(const PipelineResult& r, uint64_t query_restart, SolveStatus& status, uint64_t& cost,
              std::optional<uint64_t>& query, std::optional<FeatureVector>& features) {
    status = r.outcome.status;
    cost = r.outcome.total_conflicts;
    for (const auto& w : r.windows) {
        if (w.restart_index == query_restart) {
            query = w.closed_at_conflict;
            features = w.features;
            break;
        }
    }
}

bool solved(SolveStatus s) { return s == SolveStatus::sat || s == SolveStatus::unsat; }

}  // namespace

RaceObservation observe_race(const Formula& f, const std::string& instance_id,
                             const RaceConfig& cfg) {
    PipelineConfig pa{cfg.solver_a, std::nullopt, false};
    PipelineConfig pb{cfg.solver_b, std::nullopt, false};
    const PipelineResult ra = run_pipeline(f, pa);
    const PipelineResult rb = run_pipeline(f, pb);

    RaceObservation obs;
    obs.instance_id = instance_id;
    fill_run(ra, cfg.query_restart_a, obs.status_a, obs.cost_a, obs.query_a, obs.features_a);
    fill_run(rb, cfg.query_restart_b, obs.status_b, obs.cost_b, obs.query_b, obs.features_b);
    if (solved(obs.status_a) && solved(obs.status_b) && obs.status_a != obs.status_b)
        throw std::logic_error("solvers disagree on " + instance_id);
    obs.sat = obs.status_a == SolveStatus::sat || obs.status_b == SolveStatus::sat;
    return obs;
}

RaceDecision decide_race(const RaceObservation& obs, const LmpModelPair& models_a,
                         const LmpModelPair& models_b, RaceStrategy strategy) {
    RaceDecision d;

    if (strategy == RaceStrategy::oracle_best) {
        // Clairvoyant selection before either run starts: no parallel burn.
        d.chosen = obs.cost_a <= obs.cost_b ? 'a' : 'b';
        d.cost_chosen = std::min(obs.cost_a, obs.cost_b);
        return d;
    }

    constexpr uint64_t kNever = std::numeric_limits<uint64_t>::max();
    const uint64_t finish_a = solved(obs.status_a) ? obs.cost_a : kNever;
    const uint64_t finish_b = solved(obs.status_b) ? obs.cost_b : kNever;
    const bool have_queries = obs.query_a && obs.query_b;
    const uint64_t t_dec = have_queries ? std::max(*obs.query_a, *obs.query_b) : kNever;
    const uint64_t early = std::min(finish_a, finish_b);

    if (early == kNever && !have_queries) {
        d.undecided = true;
        return d;
    }

    if (early <= t_dec) {
        d.by_solve = true;
        d.chosen = finish_a <= finish_b ? 'a' : 'b';
        d.decision_point = early;
    } else {
        const PredictMode mode = strategy == RaceStrategy::lmp_avg
                                     ? PredictMode::geometric_mean
                                     : (obs.sat ? PredictMode::oracle_sat : PredictMode::oracle_unsat);
        d.pred_a = predict(models_a, obs.features_a->values, mode, 0).log_conflicts_pred;
        d.pred_b = predict(models_b, obs.features_b->values, mode, 0).log_conflicts_pred;
        d.chosen = *d.pred_a <= *d.pred_b ? 'a' : 'b';
        d.decision_point = t_dec;
    }
    const uint64_t cost_loser = d.chosen == 'a' ? obs.cost_b : obs.cost_a;
    d.cost_chosen = d.chosen == 'a' ? obs.cost_a : obs.cost_b;
    d.loser_charge = std::min(cost_loser, d.decision_point);
    return d;
}

RaceTally tally(std::span<const RaceObservation> observations, const LmpModelPair& models_a,
                const LmpModelPair& models_b, RaceStrategy strategy) {
    RaceTally t;
    for (const auto& obs : observations) {
        const RaceDecision d = decide_race(obs, models_a, models_b, strategy);
        if (d.undecided) {
            t.undecided += 1;
            continue;
        }
        t.decided += 1;
        t.by_solve += d.by_solve;
        t.baseline_total += (static_cast<double>(obs.cost_a) + static_cast<double>(obs.cost_b)) / 2.0;
        t.oracle_total += static_cast<double>(std::min(obs.cost_a, obs.cost_b));
        t.total_without += static_cast<double>(d.cost_chosen);
        t.total_with += static_cast<double>(d.cost_chosen) + static_cast<double>(d.loser_charge);
    }
    return t;
}

double improvement_pct(double baseline_total, double strategy_total) {
    if (baseline_total <= 0.0) return 0.0;
    return 100.0 * (baseline_total - strategy_total) / baseline_total;
}

}  // namespace satcast
