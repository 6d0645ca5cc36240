#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "satcast/cnf.hpp"
#include "satcast/lmp.hpp"
#include "satcast/pipeline.hpp"
#include "satcast/portfolio.hpp"
#include "satcast/regress.hpp"

namespace satcast {

struct Instance {
    std::string id;
    Formula formula;
};

// Random 3-SAT ensemble around the phase transition; variables and ratio
// drawn uniformly per instance from the given ranges.
struct EnsembleConfig {
    size_t count = 600;
    int min_vars = 100;
    int max_vars = 160;
    double min_ratio = 4.1;
    double max_ratio = 5.0;
    int clause_size = 3;
    uint64_t seed = 1;
};

std::vector<Instance> generate_ensemble(const EnsembleConfig& cfg);

// All *.cnf files in a directory, sorted by filename; the id is the stem.
std::vector<Instance> ingest_directory(const std::filesystem::path& dir);

// One solved instance with everything the estimators produced along the way.
struct InstanceRun {
    std::string id;
    SolveStatus status = SolveStatus::budget_exhausted;
    bool sat = false;
    uint64_t total_conflicts = 0;
    uint64_t total_decisions = 0;
    uint64_t total_propagations = 0;
    std::vector<WindowResult> windows;
    std::vector<EstimatePoint> estimates;
};

// Solves every instance under one pipeline config. `jobs` instances run in
// parallel; results are ordered by input position regardless of completion.
std::vector<InstanceRun> collect(std::span<const Instance> instances, const PipelineConfig& cfg,
                                 int jobs);

// Indices of the first `per_label` satisfiable and the first `per_label`
// unsatisfiable runs, in input order. Throws when either label runs short.
std::vector<size_t> select_balanced(std::span<const InstanceRun> runs, size_t per_label);

// Percentage of predictions within multiplicative factor k of the truth.
// Absent predictions are conventionally +infinity (outside every factor).
double error_factor(std::span<const double> preds, std::span<const double> truths, double k);

enum class EstimateMethod { wbe, pb };

// Mean over instances of log(estimate/truth) at each normalized-time decile
// (fractions 0.1..1.0 of the instance's own total conflicts), estimates
// forward-filled between samples. Instances contribute to a decile only once
// the method has produced a value by that time.
struct CurveSeries {
    std::vector<double> mean_log_ratio;  // one per decile
    std::vector<size_t> counts;
};

CurveSeries mean_log_ratio_curve(std::span<const InstanceRun> runs,
                                 std::span<const size_t> selection, EstimateMethod method,
                                 int deciles = 10);

// --- evaluate: error-factor tables at one query restart -------------------

struct EvaluateConfig {
    TrainConfig train;
    uint64_t query_restart = 0;
    std::vector<double> factors{2.0, 4.0, 8.0};
};

struct MethodRow {
    std::string method;  // pb | wbe | lmp-oracle | lmp-sat | lmp-unsat | lmp-avg
    std::string label;   // sat | unsat | all
    size_t n = 0;
    std::vector<double> pct;  // parallel to factors
};

struct PredictionEntry {
    std::string id;
    bool sat = false;
    double truth = 0.0;  // conflicts
    std::optional<double> pb;
    double wbe = 0.0;
    double lmp_sat = 0.0;    // linear domain
    double lmp_unsat = 0.0;
    double lmp_avg = 0.0;
};

struct EvaluateReport {
    std::vector<MethodRow> rows;
    std::vector<PredictionEntry> predictions;
};

// Own-label LMP predictions are out-of-fold from instance-disjoint CV; the
// other label's model (trained on the full other-label subset, which shares
// no instance) provides the cross prediction for the geometric mean.
EvaluateReport evaluate(std::span<const InstanceRun> runs, std::span<const size_t> selection,
                        const EvaluateConfig& cfg);

// --- restart chaining ------------------------------------------------------

struct ChainConfig {
    TrainConfig train;
    std::vector<uint64_t> query_restarts;  // ascending; last one is evaluated
    double factor = 2.0;
};

struct ChainReport {
    uint64_t final_restart = 0;
    size_t n = 0;             // instances with a window at the final restart
    double plain_pct = 0.0;   // error factor of unaugmented predictions
    double augmented_pct = 0.0;
};

// Trains per-restart models with and without prediction history. History
// slots carry the chain's own earlier out-of-fold predictions, so no model
// ever sees its test instance, directly or through the history.
ChainReport chain_experiment(std::span<const InstanceRun> runs, const ChainConfig& cfg);

// --- portfolio --------------------------------------------------------------

struct PortfolioConfig {
    RaceConfig race;
    LmpTrainConfig train;
    uint64_t split_seed = 17;  // seeded 50/50 train/test instance split
    int jobs = 1;
};

struct PortfolioRow {
    std::string label;     // sat | unsat | all
    std::string strategy;  // oracle | lmp-oracle | lmp-avg
    size_t n = 0;
    double baseline_total = 0.0;
    double strategy_total_without = 0.0;
    double strategy_total_with = 0.0;
    double improvement_without = 0.0;
    double improvement_with = 0.0;
};

struct PortfolioReport {
    std::vector<PortfolioRow> rows;
    std::vector<RaceObservation> test_observations;
    LmpModelPair models_a, models_b;
};

PortfolioReport portfolio_experiment(std::span<const Instance> instances,
                                     const PortfolioConfig& cfg);

// --- artifacts ---------------------------------------------------------------

// Shortest representation that parses back to the same double ("%.17g").
std::string format_double(double x);

void write_runs_csv(const std::filesystem::path& file, std::span<const InstanceRun> runs);
void write_feature_csv(const std::filesystem::path& file, std::span<const InstanceRun> runs);
void write_estimates_csv(const std::filesystem::path& file, std::span<const InstanceRun> runs);
void write_evaluate_csv(const std::filesystem::path& file, const EvaluateReport& report,
                        std::span<const double> factors);
void write_curves_csv(const std::filesystem::path& file, const CurveSeries& wbe,
                      const CurveSeries& pb);
void write_portfolio_csv(const std::filesystem::path& file, const PortfolioReport& report);

// Rebuilds runs (without event-derived streams) and feature rows from disk.
std::vector<InstanceRun> read_runs_csv(const std::filesystem::path& file);
void read_feature_csv(const std::filesystem::path& file, std::vector<InstanceRun>& runs);
void read_estimates_csv(const std::filesystem::path& file, std::vector<InstanceRun>& runs);

// Model-pair bundle: the two model documents plus shared metadata.
std::string pair_to_document(const LmpModelPair& pair);
LmpModelPair pair_from_document(std::string_view doc);

}  // namespace satcast
