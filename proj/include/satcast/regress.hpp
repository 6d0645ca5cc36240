#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace satcast {

// One training example: the fold unit is the instance id, so several rows of
// one instance (multiple query points) always land on the same side of a
// train/test split.
struct TrainRow {
    std::string instance_id;
    std::vector<double> x;  // values in the shared column layout
    double y;               // natural-log target
};

struct TrainConfig {
    std::vector<double> lambda_grid{1e-6, 1e-4, 1e-2, 1.0, 10.0, 100.0};
    int folds = 10;
    int inner_folds = 5;  // lambda selection within each training fold
    double vif_threshold = 10.0;
    bool aic_elimination = true;
    uint64_t fold_seed = 0;
};

// Per-feature training mean and population standard deviation.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> sd;  // > 0 for every retained feature
};

class RidgeModel {
public:
    double lambda = 0.0;
    std::vector<std::string> retained;  // feature names, in column-layout order
    Standardizer standardizer;          // parallel to retained
    std::vector<double> weights;        // standardized space, parallel to retained
    double intercept = 0.0;
    // Free-form training provenance (dataset hash, fold seed, schema hash...).
    std::vector<std::pair<std::string, std::string>> metadata;

    // Resolves retained names against a row layout; throws std::invalid_argument
    // on a missing name. Must be called before predict (training does it).
    void rebind(std::span<const std::string> column_names);

    // w'((x - mean)/sd) + b over the retained columns of a full row.
    double predict(std::span<const double> row) const;

    bool operator==(const RidgeModel& other) const;

private:
    std::vector<int> retained_idx_;
};

// Ridge fit with unpenalized intercept: features are standardized internally,
// zero-variance columns are dropped silently, and the normal equations with
// the ridge term are solved by a stable factorization. Throws
// std::invalid_argument on fewer than 2 rows or non-finite inputs.
RidgeModel fit_ridge(const std::vector<std::vector<double>>& X, std::span<const double> y,
                     double lambda, std::span<const std::string> column_names);

// Backward elimination: repeatedly drop the feature with the smallest
// absolute standardized coefficient while AIC = n ln(RSS/n) + 2k strictly
// decreases; returns the retained names before the first rejected drop.
std::vector<std::string> backward_eliminate_aic(const std::vector<std::vector<double>>& X,
                                                std::span<const double> y, double lambda,
                                                std::span<const std::string> column_names);

// Greedily drops the highest-VIF feature while any exceeds the threshold;
// ties break toward the later column position.
std::vector<std::string> eliminate_collinear(const std::vector<std::vector<double>>& X,
                                             std::span<const std::string> column_names,
                                             std::span<const std::string> retained,
                                             double vif_threshold);

struct CvResult {
    std::vector<double> predictions;  // out-of-fold, natural-log domain, per row
    std::vector<int> fold_of_row;
    std::vector<double> lambda_per_fold;
    std::vector<RidgeModel> fold_models;
};

// Instance-disjoint k-fold cross-validation. Per training fold: lambda by
// inner CV over the grid, then AIC elimination, then collinearity pruning,
// then the final fit; test rows are predicted only by models that never saw
// their instance. Deterministic given row order and fold_seed.
CvResult cross_validate(std::span<const TrainRow> rows, std::span<const std::string> column_names,
                        const TrainConfig& cfg);

// The same pipeline fit on all rows (for deployment models).
RidgeModel train_model(std::span<const TrainRow> rows, std::span<const std::string> column_names,
                       const TrainConfig& cfg);

// Self-describing text document; numeric fields survive a write/read cycle
// bit-exactly.
std::string to_document(const RidgeModel& m);
RidgeModel model_from_document(std::string_view doc);

}  // namespace satcast
