#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "satcast/features.hpp"
#include "satcast/regress.hpp"

namespace satcast {

enum class PredictMode { oracle_sat, oracle_unsat, geometric_mean };

std::string_view to_string(PredictMode mode);

struct PredictionRecord {
    uint64_t restart_index;
    double log_conflicts_pred;  // natural log
    PredictMode mode;
};

// Separately trained models for satisfiable and unsatisfiable instances over
// the same column layout.
struct LmpModelPair {
    RidgeModel sat_model;
    RidgeModel unsat_model;
    std::vector<std::pair<std::string, std::string>> metadata;
};

struct LmpTrainConfig {
    TrainConfig regress;
    size_t max_training_instances = 500;  // per label, instance-level cap
    uint64_t selection_seed = 0;
};

// Keeps the rows of at most `max_instances` distinct instances, selected by a
// seeded shuffle of the ids; row order is preserved.
std::vector<TrainRow> cap_instances(std::span<const TrainRow> rows, size_t max_instances,
                                    uint64_t seed);

// One model per label, each through the full regression pipeline (inner-CV
// lambda, AIC elimination, collinearity pruning). Throws when a label subset
// has fewer instances than the fold count.
LmpModelPair train_pair(std::span<const TrainRow> sat_rows, std::span<const TrainRow> unsat_rows,
                        std::span<const std::string> column_names, const LmpTrainConfig& cfg);

// Mixed-label single model (config alternative; sensitive to the label mix).
RidgeModel train_single(std::span<const TrainRow> rows, std::span<const std::string> column_names,
                        const LmpTrainConfig& cfg);

// Oracle modes pass one model through; geometric-mean averages the two
// log-domain predictions (the geometric mean once exponentiated).
PredictionRecord predict(const LmpModelPair& pair, std::span<const double> row, PredictMode mode,
                         uint64_t restart_index);

// Column layout for a query at 0-based restart q: the canonical features
// followed by q history slots.
std::vector<std::string> chain_column_names(uint64_t restart_index);

// A model pair trained for queries at one restart index, expecting history
// of exactly that length.
struct ChainModels {
    uint64_t restart_index;
    LmpModelPair pair;
};

// Chained prediction across one instance's windows, ascending restart order:
// the first query uses the plain vector; every later query's history slots
// are this chain's own earlier outputs, imputed forward across restarts
// without windows. Models must exist for each window's restart index.
std::vector<PredictionRecord> predict_chain(
    std::span<const ChainModels> models,
    std::span<const std::pair<uint64_t, FeatureVector>> windows, PredictMode mode);

}  // namespace satcast
