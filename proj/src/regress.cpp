#include "satcast/regress.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "satcast/rng.hpp"

namespace satcast {

namespace {

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& X) {
    const auto rows = static_cast<Eigen::Index>(X.size());
    const auto cols = rows ? static_cast<Eigen::Index>(X[0].size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(X[r].size()) != cols)
            throw std::invalid_argument("ragged feature matrix");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = X[static_cast<size_t>(r)][static_cast<size_t>(c)];
    }
    return m;
}

struct SubFit {
    std::vector<int> cols;  // columns that survived the zero-variance drop
    Eigen::VectorXd mean, sd;
    Eigen::VectorXd w;  // standardized space
    double intercept = 0.0;
    double rss = 0.0;
};

// Ridge on the standardized selected columns. Standardized columns have zero
// mean, so the unpenalized intercept decouples into mean(y).
SubFit fit_subset(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::span<const int> cols,
                  double lambda) {
    const auto n = X.rows();
    SubFit fit;
    for (int c : cols) {
        const double mu = X.col(c).mean();
        const double var = (X.col(c).array() - mu).square().sum() / static_cast<double>(n);
        if (var > 0.0) {
            fit.cols.push_back(c);
        }
    }
    const auto m = static_cast<Eigen::Index>(fit.cols.size());
    fit.intercept = y.mean();
    const Eigen::VectorXd yc = y.array() - fit.intercept;
    if (m == 0) {
        fit.rss = yc.squaredNorm();
        return fit;
    }
    fit.mean.resize(m);
    fit.sd.resize(m);
    Eigen::MatrixXd Z(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const auto col = X.col(fit.cols[static_cast<size_t>(j)]);
        fit.mean(j) = col.mean();
        fit.sd(j) = std::sqrt((col.array() - fit.mean(j)).square().sum() / static_cast<double>(n));
        Z.col(j) = (col.array() - fit.mean(j)) / fit.sd(j);
    }
    Eigen::MatrixXd A = Z.transpose() * Z;
    A.diagonal().array() += lambda;
    fit.w = A.ldlt().solve(Z.transpose() * yc);
    fit.rss = (yc - Z * fit.w).squaredNorm();
    return fit;
}

double aic_score(Eigen::Index n, double rss, size_t features) {
    const double safe_rss = std::max(rss, 1e-300);  // a perfect fit still ranks by k
    return static_cast<double>(n) * std::log(safe_rss / static_cast<double>(n)) +
           2.0 * (static_cast<double>(features) + 1.0);
}

void check_inputs(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  std::span<const std::string> column_names) {
    if (X.rows() < 2) throw std::invalid_argument("need at least 2 rows");
    if (X.rows() != y.size()) throw std::invalid_argument("row/target count mismatch");
    if (static_cast<size_t>(X.cols()) != column_names.size())
        throw std::invalid_argument("column/name count mismatch");
    if (!X.allFinite() || !y.allFinite()) throw std::invalid_argument("non-finite inputs");
}

RidgeModel model_from_fit(const SubFit& fit, double lambda,
                          std::span<const std::string> column_names) {
    RidgeModel model;
    model.lambda = lambda;
    model.intercept = fit.intercept;
    for (size_t j = 0; j < fit.cols.size(); ++j) {
        model.retained.push_back(column_names[static_cast<size_t>(fit.cols[j])]);
        model.standardizer.mean.push_back(fit.mean(static_cast<Eigen::Index>(j)));
        model.standardizer.sd.push_back(fit.sd(static_cast<Eigen::Index>(j)));
        model.weights.push_back(fit.w(static_cast<Eigen::Index>(j)));
    }
    model.rebind(column_names);
    return model;
}

std::vector<int> name_indices(std::span<const std::string> column_names,
                              std::span<const std::string> names) {
    std::vector<int> idx;
    idx.reserve(names.size());
    for (const auto& name : names) {
        const auto it = std::find(column_names.begin(), column_names.end(), name);
        if (it == column_names.end())
            throw std::invalid_argument("unknown feature name: " + name);
        idx.push_back(static_cast<int>(it - column_names.begin()));
    }
    return idx;
}

}  // namespace

void RidgeModel::rebind(std::span<const std::string> column_names) {
    retained_idx_ = name_indices(column_names, retained);
}

double RidgeModel::predict(std::span<const double> row) const {
    if (retained_idx_.size() != retained.size())
        throw std::logic_error("model not bound to a column layout");
    double acc = intercept;
    for (size_t j = 0; j < retained_idx_.size(); ++j) {
        acc += weights[j] *
               (row[static_cast<size_t>(retained_idx_[j])] - standardizer.mean[j]) /
               standardizer.sd[j];
    }
    return acc;
}

bool RidgeModel::operator==(const RidgeModel& other) const {
    return lambda == other.lambda && retained == other.retained &&
           standardizer.mean == other.standardizer.mean &&
           standardizer.sd == other.standardizer.sd && weights == other.weights &&
           intercept == other.intercept && metadata == other.metadata;
}

RidgeModel fit_ridge(const std::vector<std::vector<double>>& X, std::span<const double> y,
                     double lambda, std::span<const std::string> column_names) {
    const Eigen::MatrixXd Xm = to_matrix(X);
    const Eigen::VectorXd ym = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
    check_inputs(Xm, ym, column_names);
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
    std::vector<int> all(static_cast<size_t>(Xm.cols()));
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return model_from_fit(fit_subset(Xm, ym, all, lambda), lambda, column_names);
}

std::vector<std::string> backward_eliminate_aic(const std::vector<std::vector<double>>& X,
                                                std::span<const double> y, double lambda,
                                                std::span<const std::string> column_names) {
    const Eigen::MatrixXd Xm = to_matrix(X);
    const Eigen::VectorXd ym = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
    check_inputs(Xm, ym, column_names);

    std::vector<int> all(static_cast<size_t>(Xm.cols()));
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    SubFit current = fit_subset(Xm, ym, all, lambda);
    double current_aic = aic_score(Xm.rows(), current.rss, current.cols.size());

    while (!current.cols.empty()) {
        size_t drop = 0;
        for (size_t j = 1; j < current.cols.size(); ++j) {
            if (std::abs(current.w(static_cast<Eigen::Index>(j))) <
                std::abs(current.w(static_cast<Eigen::Index>(drop))))
                drop = j;
        }
        std::vector<int> trial_cols = current.cols;
        trial_cols.erase(trial_cols.begin() + static_cast<ptrdiff_t>(drop));
        SubFit trial = fit_subset(Xm, ym, trial_cols, lambda);
        const double trial_aic = aic_score(Xm.rows(), trial.rss, trial.cols.size());
        if (trial_aic < current_aic) {
            current = std::move(trial);
            current_aic = trial_aic;
        } else {
            break;
        }
    }
    std::vector<std::string> names;
    names.reserve(current.cols.size());
    for (int c : current.cols) names.push_back(column_names[static_cast<size_t>(c)]);
    return names;
}

std::vector<std::string> eliminate_collinear(const std::vector<std::vector<double>>& X,
                                             std::span<const std::string> column_names,
                                             std::span<const std::string> retained,
                                             double vif_threshold) {
    const Eigen::MatrixXd Xm = to_matrix(X);
    const auto n = Xm.rows();
    std::vector<int> current = name_indices(column_names, retained);
    std::sort(current.begin(), current.end());

    // Zero-variance columns cannot be standardized; drop them up front.
    std::erase_if(current, [&](int c) {
        const double mu = Xm.col(c).mean();
        return (Xm.col(c).array() - mu).square().sum() == 0.0;
    });

    while (current.size() >= 2) {
        const auto m = static_cast<Eigen::Index>(current.size());
        Eigen::MatrixXd Z(n, m);
        for (Eigen::Index j = 0; j < m; ++j) {
            const auto col = Xm.col(current[static_cast<size_t>(j)]);
            const double mu = col.mean();
            const double sd = std::sqrt((col.array() - mu).square().sum() / static_cast<double>(n));
            Z.col(j) = (col.array() - mu) / sd;
        }
        // VIF_j = 1/(1 - R²) of column j regressed on the others; the tiny
        // ridge keeps perfectly collinear systems solvable (VIF then huge).
        double worst_vif = 0.0;
        size_t worst = 0;
        for (Eigen::Index j = 0; j < m; ++j) {
            Eigen::MatrixXd others(n, m - 1);
            others.leftCols(j) = Z.leftCols(j);
            others.rightCols(m - 1 - j) = Z.rightCols(m - 1 - j);
            Eigen::MatrixXd A = others.transpose() * others;
            A.diagonal().array() += 1e-10;
            const Eigen::VectorXd w = A.ldlt().solve(others.transpose() * Z.col(j));
            const double rss = (Z.col(j) - others * w).squaredNorm();
            const double r2 = 1.0 - rss / static_cast<double>(n);
            const double vif = 1.0 / std::max(1.0 - r2, 1e-12);
            if (vif >= worst_vif) {  // >= : ties break toward the later column
                worst_vif = vif;
                worst = static_cast<size_t>(j);
            }
        }
        if (worst_vif <= vif_threshold) break;
        current.erase(current.begin() + static_cast<ptrdiff_t>(worst));
    }

    std::vector<std::string> names;
    names.reserve(current.size());
    for (int c : current) names.push_back(column_names[static_cast<size_t>(c)]);
    return names;
}

namespace {

// Unique instance ids in first appearance order, shuffled, dealt round-robin.
std::unordered_map<std::string, int> assign_folds(std::span<const TrainRow> rows, int folds,
                                                  uint64_t seed) {
    std::vector<std::string> ids;
    std::unordered_set<std::string> seen;
    for (const auto& row : rows) {
        if (seen.insert(row.instance_id).second) ids.push_back(row.instance_id);
    }
    if (static_cast<int>(ids.size()) < folds)
        throw std::invalid_argument("fewer instances than folds");
    Rng rng(seed);
    for (size_t i = ids.size(); i > 1; --i)
        std::swap(ids[i - 1], ids[rng.below(i)]);
    std::unordered_map<std::string, int> fold;
    for (size_t i = 0; i < ids.size(); ++i) fold[ids[i]] = static_cast<int>(i % static_cast<size_t>(folds));
    return fold;
}

struct Split {
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    std::vector<size_t> row_index;  // into the original row span
};

// Lambda with the lowest inner-CV squared error on plain ridge over all
// columns; ties break toward the earlier grid entry.
double select_lambda(std::span<const TrainRow> rows, const std::vector<size_t>& train_rows,
                     std::span<const std::string> column_names, const TrainConfig& cfg,
                     uint64_t seed) {
    if (cfg.lambda_grid.empty()) throw std::invalid_argument("empty lambda grid");
    if (cfg.lambda_grid.size() == 1) return cfg.lambda_grid[0];

    std::vector<std::string> ids;
    std::unordered_set<std::string> seen;
    for (size_t r : train_rows) {
        if (seen.insert(rows[r].instance_id).second) ids.push_back(rows[r].instance_id);
    }
    const int inner = std::max(2, std::min(cfg.inner_folds, static_cast<int>(ids.size())));
    Rng rng(seed);
    for (size_t i = ids.size(); i > 1; --i)
        std::swap(ids[i - 1], ids[rng.below(i)]);
    std::unordered_map<std::string, int> fold;
    for (size_t i = 0; i < ids.size(); ++i) fold[ids[i]] = static_cast<int>(i % static_cast<size_t>(inner));

    double best_lambda = cfg.lambda_grid[0];
    double best_sse = std::numeric_limits<double>::infinity();
    for (const double lambda : cfg.lambda_grid) {
        double sse = 0.0;
        for (int f = 0; f < inner; ++f) {
            std::vector<std::vector<double>> trainX;
            std::vector<double> trainy;
            std::vector<size_t> test;
            for (size_t r : train_rows) {
                if (fold[rows[r].instance_id] == f) {
                    test.push_back(r);
                } else {
                    trainX.push_back(rows[r].x);
                    trainy.push_back(rows[r].y);
                }
            }
            if (trainX.size() < 2 || test.empty()) continue;
            const RidgeModel model = fit_ridge(trainX, trainy, lambda, column_names);
            for (size_t r : test) {
                const double err = model.predict(rows[r].x) - rows[r].y;
                sse += err * err;
            }
        }
        if (sse < best_sse) {
            best_sse = sse;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

RidgeModel train_on_rows(std::span<const TrainRow> rows, const std::vector<size_t>& train_rows,
                         std::span<const std::string> column_names, const TrainConfig& cfg,
                         uint64_t lambda_seed) {
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    X.reserve(train_rows.size());
    for (size_t r : train_rows) {
        X.push_back(rows[r].x);
        y.push_back(rows[r].y);
    }
    const double lambda = select_lambda(rows, train_rows, column_names, cfg, lambda_seed);
    std::vector<std::string> kept(column_names.begin(), column_names.end());
    if (cfg.aic_elimination) kept = backward_eliminate_aic(X, y, lambda, column_names);
    kept = eliminate_collinear(X, column_names, kept, cfg.vif_threshold);

    // Final fit on the surviving columns only.
    const std::vector<int> idx = name_indices(column_names, kept);
    std::vector<std::vector<double>> Xs(X.size(), std::vector<double>(kept.size()));
    for (size_t r = 0; r < X.size(); ++r)
        for (size_t j = 0; j < idx.size(); ++j) Xs[r][j] = X[r][static_cast<size_t>(idx[j])];
    RidgeModel model = fit_ridge(Xs, y, lambda, kept);
    model.rebind(column_names);  // predictions take full-layout rows
    return model;
}

}  // namespace

CvResult cross_validate(std::span<const TrainRow> rows, std::span<const std::string> column_names,
                        const TrainConfig& cfg) {
    if (cfg.folds < 2) throw std::invalid_argument("need at least 2 folds");
    const auto fold = assign_folds(rows, cfg.folds, cfg.fold_seed);

    CvResult result;
    result.predictions.assign(rows.size(), 0.0);
    result.fold_of_row.resize(rows.size());
    for (size_t r = 0; r < rows.size(); ++r)
        result.fold_of_row[r] = fold.at(rows[r].instance_id);

    for (int f = 0; f < cfg.folds; ++f) {
        std::vector<size_t> train_rows, test_rows;
        for (size_t r = 0; r < rows.size(); ++r) {
            (result.fold_of_row[r] == f ? test_rows : train_rows).push_back(r);
        }
        if (train_rows.size() < 2) throw std::invalid_argument("fold leaves too few training rows");
        RidgeModel model = train_on_rows(rows, train_rows, column_names, cfg,
                                         cfg.fold_seed * 1000003ull + static_cast<uint64_t>(f) + 1);
        for (size_t r : test_rows) result.predictions[r] = model.predict(rows[r].x);
        model.metadata.emplace_back("fold", std::to_string(f));
        result.lambda_per_fold.push_back(model.lambda);
        result.fold_models.push_back(std::move(model));
    }
    return result;
}

RidgeModel train_model(std::span<const TrainRow> rows, std::span<const std::string> column_names,
                       const TrainConfig& cfg) {
    std::vector<size_t> all(rows.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    return train_on_rows(rows, all, column_names, cfg, cfg.fold_seed * 1000003ull);
}

std::string to_document(const RidgeModel& m) {
    nlohmann::ordered_json doc;
    doc["kind"] = "satcast-ridge-model";
    doc["lambda"] = m.lambda;
    doc["intercept"] = m.intercept;
    doc["retained"] = m.retained;
    doc["mean"] = m.standardizer.mean;
    doc["sd"] = m.standardizer.sd;
    doc["weights"] = m.weights;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.metadata) meta[k] = v;
    doc["metadata"] = meta;
    return doc.dump(2) + "\n";
}

RidgeModel model_from_document(std::string_view doc) {
    const auto j = nlohmann::ordered_json::parse(doc);
    if (j.at("kind") != "satcast-ridge-model") throw std::invalid_argument("not a model document");
    RidgeModel m;
    m.lambda = j.at("lambda").get<double>();
    m.intercept = j.at("intercept").get<double>();
    m.retained = j.at("retained").get<std::vector<std::string>>();
    m.standardizer.mean = j.at("mean").get<std::vector<double>>();
    m.standardizer.sd = j.at("sd").get<std::vector<double>>();
    m.weights = j.at("weights").get<std::vector<double>>();
    for (const auto& [k, v] : j.at("metadata").items()) m.metadata.emplace_back(k, v.get<std::string>());
    return m;
}

}  // namespace satcast
