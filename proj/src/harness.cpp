#include "satcast/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "satcast/rng.hpp"

namespace satcast {

std::vector<Instance> generate_ensemble(const EnsembleConfig& cfg) {
    Rng rng(cfg.seed);
    std::vector<Instance> instances;
    instances.reserve(cfg.count);
    for (size_t i = 0; i < cfg.count; ++i) {
        GeneratorConfig g;
        g.num_vars = cfg.min_vars + static_cast<int>(rng.below(
                                        static_cast<uint64_t>(cfg.max_vars - cfg.min_vars + 1)));
        g.clause_ratio = cfg.min_ratio + rng.unit() * (cfg.max_ratio - cfg.min_ratio);
        g.clause_size = cfg.clause_size;
        g.seed = rng.next();
        char id[32];
        std::snprintf(id, sizeof id, "rand-%05zu", i);
        instances.push_back({id, generate_random_ksat(g)});
    }
    return instances;
}

std::vector<Instance> ingest_directory(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".cnf")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Instance> instances;
    instances.reserve(files.size());
    for (const auto& file : files) {
        std::ifstream in(file);
        if (!in) throw std::runtime_error("cannot open " + file.string());
        instances.push_back({file.stem().string(), parse_dimacs(in).formula});
    }
    return instances;
}

std::vector<InstanceRun> collect(std::span<const Instance> instances, const PipelineConfig& cfg,
                                 int jobs) {
    std::vector<InstanceRun> runs(instances.size());
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= instances.size()) return;
            try {
                PipelineResult r = run_pipeline(instances[i].formula, cfg);
                InstanceRun& run = runs[i];
                run.id = instances[i].id;
                run.status = r.outcome.status;
                run.sat = r.outcome.status == SolveStatus::sat;
                run.total_conflicts = r.outcome.total_conflicts;
                run.total_decisions = r.outcome.total_decisions;
                run.total_propagations = r.outcome.total_propagations;
                run.windows = std::move(r.windows);
                run.estimates = std::move(r.estimates);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    const int n = std::max(1, jobs);
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n));
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return runs;
}

std::vector<size_t> select_balanced(std::span<const InstanceRun> runs, size_t per_label) {
    std::vector<size_t> sat, unsat;
    for (size_t i = 0; i < runs.size(); ++i) {
        if (runs[i].status == SolveStatus::sat && sat.size() < per_label) sat.push_back(i);
        if (runs[i].status == SolveStatus::unsat && unsat.size() < per_label) unsat.push_back(i);
    }
    if (sat.size() < per_label || unsat.size() < per_label)
        throw std::runtime_error("ensemble too small: " + std::to_string(sat.size()) + " sat, " +
                                 std::to_string(unsat.size()) + " unsat of " +
                                 std::to_string(per_label) + " needed");
    sat.insert(sat.end(), unsat.begin(), unsat.end());
    std::sort(sat.begin(), sat.end());
    return sat;
}

double error_factor(std::span<const double> preds, std::span<const double> truths, double k) {
    if (preds.empty() || preds.size() != truths.size())
        throw std::invalid_argument("error_factor needs matching non-empty inputs");
    size_t within = 0;
    for (size_t i = 0; i < preds.size(); ++i) {
        if (!(truths[i] > 0.0)) throw std::invalid_argument("truths must be positive");
        const double p = preds[i];
        if (p > 0.0 && std::max(p / truths[i], truths[i] / p) <= k) ++within;
    }
    return 100.0 * static_cast<double>(within) / static_cast<double>(preds.size());
}

CurveSeries mean_log_ratio_curve(std::span<const InstanceRun> runs,
                                 std::span<const size_t> selection, EstimateMethod method,
                                 int deciles) {
    CurveSeries series;
    series.mean_log_ratio.assign(static_cast<size_t>(deciles), 0.0);
    series.counts.assign(static_cast<size_t>(deciles), 0);
    for (const size_t idx : selection) {
        const InstanceRun& run = runs[idx];
        if (run.status == SolveStatus::budget_exhausted || run.total_conflicts == 0 ||
            run.estimates.empty())
            continue;
        const double truth = static_cast<double>(run.total_conflicts);
        const double log_truth = std::log(truth);
        size_t cursor = 0;
        std::optional<double> log_est;  // forward-filled, natural log
        for (int d = 0; d < deciles; ++d) {
            const double t = truth * static_cast<double>(d + 1) / static_cast<double>(deciles);
            while (cursor < run.estimates.size() &&
                   static_cast<double>(run.estimates[cursor].conflict_index) <= t) {
                const EstimatePoint& p = run.estimates[cursor];
                if (method == EstimateMethod::wbe) {
                    log_est = p.log2_total_cost * std::numbers::ln2;
                } else if (p.pb_total) {
                    log_est = std::log(*p.pb_total);
                }
                ++cursor;
            }
            if (!log_est) continue;  // the method has produced nothing yet
            series.mean_log_ratio[static_cast<size_t>(d)] += *log_est - log_truth;
            series.counts[static_cast<size_t>(d)] += 1;
        }
    }
    for (int d = 0; d < deciles; ++d) {
        if (series.counts[static_cast<size_t>(d)])
            series.mean_log_ratio[static_cast<size_t>(d)] /=
                static_cast<double>(series.counts[static_cast<size_t>(d)]);
    }
    return series;
}

namespace {

std::vector<std::string> feature_name_strings() {
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(kFeatureCount));
    for (const auto name : feature_names()) names.emplace_back(name);
    return names;
}

const WindowResult* window_at(const InstanceRun& run, uint64_t restart) {
    for (const auto& w : run.windows)
        if (w.restart_index == restart) return &w;
    return nullptr;
}

size_t unique_instance_count(std::span<const TrainRow> rows) {
    std::unordered_set<std::string> ids;
    for (const auto& r : rows) ids.insert(r.instance_id);
    return ids.size();
}

// Fold count clamped to what the subset can support (≥ 2 required).
TrainConfig clamp_folds(TrainConfig cfg, size_t unique_instances) {
    if (unique_instances < 2) throw std::runtime_error("need at least 2 instances to fold");
    cfg.folds = std::min<int>(cfg.folds, static_cast<int>(unique_instances));
    return cfg;
}

}  // namespace

EvaluateReport evaluate(std::span<const InstanceRun> runs, std::span<const size_t> selection,
                        const EvaluateConfig& cfg) {
    struct Item {
        size_t run;
        const WindowResult* window;
        bool sat;
        double truth;
    };
    std::vector<Item> items;
    for (const size_t idx : selection) {
        const InstanceRun& run = runs[idx];
        if (run.status == SolveStatus::budget_exhausted) continue;
        const WindowResult* w = window_at(run, cfg.query_restart);
        if (!w) continue;  // solved before the window closed
        items.push_back({idx, w, run.sat, static_cast<double>(run.total_conflicts)});
    }

    const std::vector<std::string> columns = feature_name_strings();
    std::vector<TrainRow> sat_rows, unsat_rows;
    std::vector<size_t> sat_items, unsat_items;
    for (size_t i = 0; i < items.size(); ++i) {
        const Item& it = items[i];
        TrainRow row{runs[it.run].id,
                     {it.window->features.values.begin(), it.window->features.values.end()},
                     std::log(it.truth)};
        if (it.sat) {
            sat_rows.push_back(std::move(row));
            sat_items.push_back(i);
        } else {
            unsat_rows.push_back(std::move(row));
            unsat_items.push_back(i);
        }
    }

    const CvResult sat_cv =
        cross_validate(sat_rows, columns, clamp_folds(cfg.train, unique_instance_count(sat_rows)));
    const CvResult unsat_cv = cross_validate(
        unsat_rows, columns, clamp_folds(cfg.train, unique_instance_count(unsat_rows)));
    const RidgeModel sat_full =
        train_model(sat_rows, columns, clamp_folds(cfg.train, unique_instance_count(sat_rows)));
    const RidgeModel unsat_full =
        train_model(unsat_rows, columns, clamp_folds(cfg.train, unique_instance_count(unsat_rows)));

    EvaluateReport report;
    report.predictions.resize(items.size());
    for (size_t j = 0; j < sat_items.size(); ++j) {
        PredictionEntry& e = report.predictions[sat_items[j]];
        e.lmp_sat = std::exp(sat_cv.predictions[j]);
        e.lmp_unsat = std::exp(unsat_full.predict(sat_rows[j].x));
    }
    for (size_t j = 0; j < unsat_items.size(); ++j) {
        PredictionEntry& e = report.predictions[unsat_items[j]];
        e.lmp_unsat = std::exp(unsat_cv.predictions[j]);
        e.lmp_sat = std::exp(sat_full.predict(unsat_rows[j].x));
    }
    for (size_t i = 0; i < items.size(); ++i) {
        PredictionEntry& e = report.predictions[i];
        e.id = runs[items[i].run].id;
        e.sat = items[i].sat;
        e.truth = items[i].truth;
        e.wbe = std::exp2(items[i].window->log2_wbe_total);
        e.pb = items[i].window->pb_total;
        e.lmp_avg = std::sqrt(e.lmp_sat) * std::sqrt(e.lmp_unsat);
    }

    const auto method_value = [](const PredictionEntry& e, std::string_view method) -> double {
        if (method == "pb") return e.pb.value_or(std::numeric_limits<double>::infinity());
        if (method == "wbe") return e.wbe;
        if (method == "lmp-oracle") return e.sat ? e.lmp_sat : e.lmp_unsat;
        if (method == "lmp-sat") return e.lmp_sat;
        if (method == "lmp-unsat") return e.lmp_unsat;
        return e.lmp_avg;  // lmp-avg
    };
    static constexpr std::string_view kMethods[] = {"pb",      "wbe",       "lmp-oracle",
                                                    "lmp-sat", "lmp-unsat", "lmp-avg"};
    static constexpr std::string_view kLabels[] = {"sat", "unsat", "all"};
    for (const auto method : kMethods) {
        for (const auto label : kLabels) {
            std::vector<double> preds, truths;
            for (const auto& e : report.predictions) {
                if ((label == "sat" && !e.sat) || (label == "unsat" && e.sat)) continue;
                preds.push_back(method_value(e, method));
                truths.push_back(e.truth);
            }
            MethodRow row;
            row.method = method;
            row.label = label;
            row.n = preds.size();
            for (const double k : cfg.factors)
                row.pct.push_back(preds.empty() ? 0.0 : error_factor(preds, truths, k));
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

ChainReport chain_experiment(std::span<const InstanceRun> runs, const ChainConfig& cfg) {
    if (cfg.query_restarts.empty()) throw std::invalid_argument("no query restarts");
    const uint64_t final_q = cfg.query_restarts.back();
    const std::vector<std::string> base_columns = feature_name_strings();

    // The chain's own out-of-fold predictions so far, per instance.
    std::unordered_map<std::string, std::vector<std::pair<uint64_t, double>>> chain;
    std::unordered_map<std::string, double> augmented_final, plain_final;

    for (const bool want_sat : {false, true}) {
        for (const uint64_t q : cfg.query_restarts) {
            std::vector<TrainRow> rows;
            for (const auto& run : runs) {
                if (run.status == SolveStatus::budget_exhausted || run.sat != want_sat) continue;
                const WindowResult* w = window_at(run, q);
                if (!w) continue;
                std::vector<double> x(w->features.values.begin(), w->features.values.end());
                const auto hist = impute_history(chain[run.id], q);
                x.insert(x.end(), hist.begin(), hist.end());
                rows.push_back({run.id, std::move(x), std::log(static_cast<double>(run.total_conflicts))});
            }
            if (unique_instance_count(rows) < 2) continue;
            const std::vector<std::string> columns = chain_column_names(q);
            const CvResult cv =
                cross_validate(rows, columns, clamp_folds(cfg.train, unique_instance_count(rows)));
            for (size_t r = 0; r < rows.size(); ++r) {
                chain[rows[r].instance_id].emplace_back(q, cv.predictions[r]);
                if (q == final_q) augmented_final[rows[r].instance_id] = cv.predictions[r];
            }
        }

        // Plain (history-free) predictions at the final restart.
        std::vector<TrainRow> rows;
        for (const auto& run : runs) {
            if (run.status == SolveStatus::budget_exhausted || run.sat != want_sat) continue;
            const WindowResult* w = window_at(run, final_q);
            if (!w) continue;
            rows.push_back({run.id,
                            {w->features.values.begin(), w->features.values.end()},
                            std::log(static_cast<double>(run.total_conflicts))});
        }
        if (unique_instance_count(rows) < 2) continue;
        const CvResult cv =
            cross_validate(rows, base_columns, clamp_folds(cfg.train, unique_instance_count(rows)));
        for (size_t r = 0; r < rows.size(); ++r) plain_final[rows[r].instance_id] = cv.predictions[r];
    }

    ChainReport report;
    report.final_restart = final_q;
    std::vector<double> plain_preds, augmented_preds, truths;
    for (const auto& run : runs) {
        const auto plain = plain_final.find(run.id);
        const auto augmented = augmented_final.find(run.id);
        if (plain == plain_final.end() || augmented == augmented_final.end()) continue;
        plain_preds.push_back(std::exp(plain->second));
        augmented_preds.push_back(std::exp(augmented->second));
        truths.push_back(static_cast<double>(run.total_conflicts));
    }
    report.n = truths.size();
    if (report.n) {
        report.plain_pct = error_factor(plain_preds, truths, cfg.factor);
        report.augmented_pct = error_factor(augmented_preds, truths, cfg.factor);
    }
    return report;
}

PortfolioReport portfolio_experiment(std::span<const Instance> instances,
                                     const PortfolioConfig& cfg) {
    std::vector<RaceObservation> observations(instances.size());
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= instances.size()) return;
            try {
                observations[i] = observe_race(instances[i].formula, instances[i].id, cfg.race);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    const int n = std::max(1, cfg.jobs);
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Labeled observations only; seeded split into train and test halves.
    std::vector<size_t> labeled;
    for (size_t i = 0; i < observations.size(); ++i) {
        const auto& o = observations[i];
        if (o.status_a != SolveStatus::budget_exhausted ||
            o.status_b != SolveStatus::budget_exhausted)
            labeled.push_back(i);
    }
    std::vector<size_t> shuffled = labeled;
    Rng rng(cfg.split_seed);
    for (size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    const size_t half = shuffled.size() / 2;
    std::unordered_set<size_t> train_set(shuffled.begin(),
                                         shuffled.begin() + static_cast<ptrdiff_t>(half));

    const std::vector<std::string> columns = feature_name_strings();
    const auto rows_for = [&](bool config_a, bool want_sat) {
        std::vector<TrainRow> rows;
        for (const size_t i : labeled) {
            if (!train_set.contains(i)) continue;
            const auto& o = observations[i];
            if (o.sat != want_sat) continue;
            const auto& features = config_a ? o.features_a : o.features_b;
            const uint64_t cost = config_a ? o.cost_a : o.cost_b;
            const SolveStatus status = config_a ? o.status_a : o.status_b;
            if (!features || status == SolveStatus::budget_exhausted) continue;
            rows.push_back({o.instance_id,
                            {features->values.begin(), features->values.end()},
                            std::log(static_cast<double>(cost))});
        }
        return rows;
    };

    PortfolioReport report;
    report.models_a = train_pair(rows_for(true, true), rows_for(true, false), columns, cfg.train);
    report.models_b = train_pair(rows_for(false, true), rows_for(false, false), columns, cfg.train);

    std::vector<RaceObservation> test;
    for (const size_t i : labeled)
        if (!train_set.contains(i)) test.push_back(observations[i]);
    report.test_observations = test;

    static constexpr std::string_view kLabels[] = {"sat", "unsat", "all"};
    static constexpr RaceStrategy kStrategies[] = {RaceStrategy::oracle_best,
                                                   RaceStrategy::lmp_oracle, RaceStrategy::lmp_avg};
    for (const auto label : kLabels) {
        std::vector<RaceObservation> subset;
        for (const auto& o : test) {
            if ((label == "sat" && !o.sat) || (label == "unsat" && o.sat)) continue;
            subset.push_back(o);
        }
        for (const RaceStrategy strategy : kStrategies) {
            const RaceTally t = tally(subset, report.models_a, report.models_b, strategy);
            PortfolioRow row;
            row.label = label;
            row.strategy = std::string(to_string(strategy));
            row.n = t.decided;
            row.baseline_total = t.baseline_total;
            if (strategy == RaceStrategy::oracle_best) {
                row.strategy_total_without = t.oracle_total;
                row.strategy_total_with = t.oracle_total;
            } else {
                row.strategy_total_without = t.total_without;
                row.strategy_total_with = t.total_with;
            }
            row.improvement_without = improvement_pct(t.baseline_total, row.strategy_total_without);
            row.improvement_with = improvement_pct(t.baseline_total, row.strategy_total_with);
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

// --- artifacts ---------------------------------------------------------------

std::string format_double(double x) {
    char buf[40];
    for (const int precision : {15, 16, 17}) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

namespace {

std::string_view status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::sat: return "sat";
        case SolveStatus::unsat: return "unsat";
        case SolveStatus::budget_exhausted: return "budget_exhausted";
    }
    return "?";
}

SolveStatus status_from(std::string_view s) {
    if (s == "sat") return SolveStatus::sat;
    if (s == "unsat") return SolveStatus::unsat;
    if (s == "budget_exhausted") return SolveStatus::budget_exhausted;
    throw std::runtime_error("unknown status: " + std::string(s));
}

std::ofstream open_out(const std::filesystem::path& file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);  // binary: byte-identical across platforms
    if (!out) throw std::runtime_error("cannot write " + file.string());
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

void write_runs_csv(const std::filesystem::path& file, std::span<const InstanceRun> runs) {
    auto out = open_out(file);
    out << "instance,status,conflicts,decisions,propagations\n";
    for (const auto& r : runs) {
        out << r.id << ',' << status_name(r.status) << ',' << r.total_conflicts << ','
            << r.total_decisions << ',' << r.total_propagations << '\n';
    }
}

std::vector<InstanceRun> read_runs_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<InstanceRun> runs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 5) throw std::runtime_error("bad runs row: " + line);
        InstanceRun run;
        run.id = f[0];
        run.status = status_from(f[1]);
        run.sat = run.status == SolveStatus::sat;
        run.total_conflicts = std::stoull(f[2]);
        run.total_decisions = std::stoull(f[3]);
        run.total_propagations = std::stoull(f[4]);
        runs.push_back(std::move(run));
    }
    return runs;
}

void write_feature_csv(const std::filesystem::path& file, std::span<const InstanceRun> runs) {
    auto out = open_out(file);
    char schema[24];
    std::snprintf(schema, sizeof schema, "%016llx",
                  static_cast<unsigned long long>(feature_schema_hash()));
    out << "# schema=" << schema << '\n';
    out << "instance,sat,restart,closed_at,log_conflicts,wbe_log2_total,pb_total";
    for (const auto name : feature_names()) out << ',' << name;
    out << '\n';
    for (const auto& r : runs) {
        if (r.status == SolveStatus::budget_exhausted) continue;
        for (const auto& w : r.windows) {
            out << r.id << ',' << (r.sat ? 1 : 0) << ',' << w.restart_index << ','
                << w.closed_at_conflict << ','
                << format_double(std::log(static_cast<double>(r.total_conflicts))) << ','
                << format_double(w.log2_wbe_total) << ','
                << (w.pb_total ? format_double(*w.pb_total) : "");
            for (const double v : w.features.values) out << ',' << format_double(v);
            out << '\n';
        }
    }
}

void read_feature_csv(const std::filesystem::path& file, std::vector<InstanceRun>& runs) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    std::unordered_map<std::string, InstanceRun*> by_id;
    for (auto& r : runs) by_id[r.id] = &r;
    std::string line;
    std::getline(in, line);
    char schema[24];
    std::snprintf(schema, sizeof schema, "%016llx",
                  static_cast<unsigned long long>(feature_schema_hash()));
    if (line != std::string("# schema=") + schema)
        throw std::runtime_error("feature schema mismatch in " + file.string());
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 7 + static_cast<size_t>(kFeatureCount))
            throw std::runtime_error("bad feature row: " + line);
        const auto it = by_id.find(f[0]);
        if (it == by_id.end()) throw std::runtime_error("feature row for unknown instance " + f[0]);
        WindowResult w;
        w.restart_index = std::stoull(f[2]);
        w.closed_at_conflict = std::stoull(f[3]);
        w.log2_wbe_total = std::strtod(f[5].c_str(), nullptr);
        if (!f[6].empty()) w.pb_total = std::strtod(f[6].c_str(), nullptr);
        for (int i = 0; i < kFeatureCount; ++i)
            w.features.values[static_cast<size_t>(i)] =
                std::strtod(f[7 + static_cast<size_t>(i)].c_str(), nullptr);
        it->second->windows.push_back(std::move(w));
    }
}

void write_estimates_csv(const std::filesystem::path& file, std::span<const InstanceRun> runs) {
    auto out = open_out(file);
    out << "instance,restart,conflict,log2_tree,log2_total,pb_total\n";
    for (const auto& r : runs) {
        for (const auto& p : r.estimates) {
            out << r.id << ',' << p.restart_index << ',' << p.conflict_index << ','
                << format_double(p.log2_tree_size) << ',' << format_double(p.log2_total_cost)
                << ',' << (p.pb_total ? format_double(*p.pb_total) : "") << '\n';
        }
    }
}

void read_estimates_csv(const std::filesystem::path& file, std::vector<InstanceRun>& runs) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    std::unordered_map<std::string, InstanceRun*> by_id;
    for (auto& r : runs) by_id[r.id] = &r;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 6) throw std::runtime_error("bad estimate row: " + line);
        const auto it = by_id.find(f[0]);
        if (it == by_id.end()) throw std::runtime_error("estimate row for unknown instance " + f[0]);
        EstimatePoint p;
        p.restart_index = std::stoull(f[1]);
        p.conflict_index = std::stoull(f[2]);
        p.log2_tree_size = std::strtod(f[3].c_str(), nullptr);
        p.log2_total_cost = std::strtod(f[4].c_str(), nullptr);
        if (!f[5].empty()) p.pb_total = std::strtod(f[5].c_str(), nullptr);
        it->second->estimates.push_back(p);
    }
}

void write_evaluate_csv(const std::filesystem::path& file, const EvaluateReport& report,
                        std::span<const double> factors) {
    auto out = open_out(file);
    out << "method,label,n";
    for (const double k : factors) out << ",x" << format_double(k);
    out << '\n';
    for (const auto& row : report.rows) {
        out << row.method << ',' << row.label << ',' << row.n;
        for (const double pct : row.pct) out << ',' << format_double(pct);
        out << '\n';
    }
}

void write_curves_csv(const std::filesystem::path& file, const CurveSeries& wbe,
                      const CurveSeries& pb) {
    auto out = open_out(file);
    out << "method,decile,n,mean_log_ratio\n";
    for (size_t d = 0; d < wbe.mean_log_ratio.size(); ++d)
        out << "wbe," << (d + 1) << ',' << wbe.counts[d] << ','
            << format_double(wbe.mean_log_ratio[d]) << '\n';
    for (size_t d = 0; d < pb.mean_log_ratio.size(); ++d)
        out << "pb," << (d + 1) << ',' << pb.counts[d] << ',' << format_double(pb.mean_log_ratio[d])
            << '\n';
}

void write_portfolio_csv(const std::filesystem::path& file, const PortfolioReport& report) {
    auto out = open_out(file);
    out << "label,strategy,n,baseline_total,total_without,total_with,improvement_without,"
           "improvement_with\n";
    for (const auto& row : report.rows) {
        out << row.label << ',' << row.strategy << ',' << row.n << ','
            << format_double(row.baseline_total) << ',' << format_double(row.strategy_total_without)
            << ',' << format_double(row.strategy_total_with) << ','
            << format_double(row.improvement_without) << ','
            << format_double(row.improvement_with) << '\n';
    }
}

std::string pair_to_document(const LmpModelPair& pair) {
    nlohmann::ordered_json doc;
    doc["kind"] = "satcast-model-pair";
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : pair.metadata) meta[k] = v;
    doc["metadata"] = meta;
    doc["sat"] = nlohmann::ordered_json::parse(to_document(pair.sat_model));
    doc["unsat"] = nlohmann::ordered_json::parse(to_document(pair.unsat_model));
    return doc.dump(2) + "\n";
}

LmpModelPair pair_from_document(std::string_view doc) {
    const auto j = nlohmann::ordered_json::parse(doc);
    if (j.at("kind") != "satcast-model-pair") throw std::invalid_argument("not a model-pair document");
    LmpModelPair pair;
    pair.sat_model = model_from_document(j.at("sat").dump());
    pair.unsat_model = model_from_document(j.at("unsat").dump());
    for (const auto& [k, v] : j.at("metadata").items())
        pair.metadata.emplace_back(k, v.get<std::string>());
    return pair;
}

}  // namespace satcast
