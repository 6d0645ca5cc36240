#include "satcast/lmp.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "satcast/rng.hpp"

namespace satcast {

std::string_view to_string(PredictMode mode) {
    switch (mode) {
        case PredictMode::oracle_sat: return "oracle-sat";
        case PredictMode::oracle_unsat: return "oracle-unsat";
        case PredictMode::geometric_mean: return "geometric-mean";
    }
    return "?";
}

std::vector<TrainRow> cap_instances(std::span<const TrainRow> rows, size_t max_instances,
                                    uint64_t seed) {
    std::vector<std::string> ids;
    std::unordered_set<std::string> seen;
    for (const auto& row : rows) {
        if (seen.insert(row.instance_id).second) ids.push_back(row.instance_id);
    }
    if (ids.size() <= max_instances) return {rows.begin(), rows.end()};
    Rng rng(seed);
    for (size_t i = ids.size(); i > 1; --i)
        std::swap(ids[i - 1], ids[rng.below(i)]);
    std::unordered_set<std::string> keep(ids.begin(),
                                         ids.begin() + static_cast<ptrdiff_t>(max_instances));
    std::vector<TrainRow> capped;
    for (const auto& row : rows) {
        if (keep.contains(row.instance_id)) capped.push_back(row);
    }
    return capped;
}

namespace {

size_t unique_instances(std::span<const TrainRow> rows) {
    std::unordered_set<std::string> ids;
    for (const auto& row : rows) ids.insert(row.instance_id);
    return ids.size();
}

RidgeModel train_label(std::span<const TrainRow> rows, std::span<const std::string> column_names,
                       const LmpTrainConfig& cfg, const char* label) {
    const std::vector<TrainRow> capped =
        cap_instances(rows, cfg.max_training_instances, cfg.selection_seed);
    if (unique_instances(capped) < static_cast<size_t>(cfg.regress.folds))
        throw std::invalid_argument(std::string(label) + " subset has fewer instances than folds");
    RidgeModel model = train_model(capped, column_names, cfg.regress);
    model.metadata.emplace_back("label", label);
    return model;
}

}  // namespace

LmpModelPair train_pair(std::span<const TrainRow> sat_rows, std::span<const TrainRow> unsat_rows,
                        std::span<const std::string> column_names, const LmpTrainConfig& cfg) {
    LmpModelPair pair;
    pair.sat_model = train_label(sat_rows, column_names, cfg, "sat");
    pair.unsat_model = train_label(unsat_rows, column_names, cfg, "unsat");
    return pair;
}

RidgeModel train_single(std::span<const TrainRow> rows, std::span<const std::string> column_names,
                        const LmpTrainConfig& cfg) {
    return train_label(rows, column_names, cfg, "mixed");
}

PredictionRecord predict(const LmpModelPair& pair, std::span<const double> row, PredictMode mode,
                         uint64_t restart_index) {
    double log_pred = 0.0;
    switch (mode) {
        case PredictMode::oracle_sat:
            log_pred = pair.sat_model.predict(row);
            break;
        case PredictMode::oracle_unsat:
            log_pred = pair.unsat_model.predict(row);
            break;
        case PredictMode::geometric_mean:
            log_pred = 0.5 * (pair.sat_model.predict(row) + pair.unsat_model.predict(row));
            break;
    }
    return {restart_index, log_pred, mode};
}

std::vector<std::string> chain_column_names(uint64_t restart_index) {
    std::vector<std::string> names;
    names.reserve(kFeatureCount + restart_index);
    for (const auto name : feature_names()) names.emplace_back(name);
    for (uint64_t i = 0; i < restart_index; ++i) names.push_back("hist_" + std::to_string(i));
    return names;
}

std::vector<PredictionRecord> predict_chain(
    std::span<const ChainModels> models,
    std::span<const std::pair<uint64_t, FeatureVector>> windows, PredictMode mode) {
    std::vector<PredictionRecord> records;
    std::vector<std::pair<uint64_t, double>> chain;  // own earlier outputs
    for (const auto& [restart, features] : windows) {
        const auto it = std::find_if(models.begin(), models.end(),
                                     [restart](const ChainModels& m) { return m.restart_index == restart; });
        if (it == models.end())
            throw std::invalid_argument("no chain model for restart " + std::to_string(restart));
        std::vector<double> row(features.values.begin(), features.values.end());
        const std::vector<double> history = impute_history(chain, restart);
        row.insert(row.end(), history.begin(), history.end());
        records.push_back(predict(it->pair, row, mode, restart));
        chain.emplace_back(restart, records.back().log_conflicts_pred);
    }
    return records;
}

}  // namespace satcast
