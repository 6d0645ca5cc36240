// satcast — dataset generation, data collection, model training, evaluation
// and portfolio experiments for online SAT search-cost prediction.
//
// Exit codes: 0 success, 1 usage, 2 I/O, 3 data, 4 internal.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "satcast/harness.hpp"

namespace fs = std::filesystem;
using namespace satcast;

namespace {

void write_text(const fs::path& file, const std::string& text) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << text;
}

// Every command records its effective parameters, so a run can be reproduced
// from the artifact directory alone. No timestamps: manifests are part of the
// byte-for-byte determinism contract.
void write_manifest(const fs::path& out_dir, const std::string& command,
                    const nlohmann::ordered_json& params) {
    nlohmann::ordered_json doc;
    doc["kind"] = "satcast-manifest";
    doc["command"] = command;
    doc["params"] = params;
    write_text(out_dir / ("manifest-" + command + ".json"), doc.dump(2) + "\n");
}

nlohmann::ordered_json solver_params(const SolverConfig& s) {
    nlohmann::ordered_json j;
    j["restarts_enabled"] = s.restarts_enabled;
    j["restart_base"] = s.restart_base;
    j["restart_factor"] = s.restart_factor;
    j["var_decay"] = s.var_decay;
    j["clause_db_cap"] = s.clause_db_cap;
    j["polarity_default"] = s.polarity_default;
    j["seed"] = s.seed;
    j["conflict_budget"] = s.conflict_budget;
    return j;
}

std::vector<InstanceRun> load_collected(const fs::path& dir, bool with_estimates) {
    std::vector<InstanceRun> runs = read_runs_csv(dir / "runs.csv");
    read_feature_csv(dir / "features.csv", runs);
    if (with_estimates && fs::exists(dir / "estimates.csv"))
        read_estimates_csv(dir / "estimates.csv", runs);
    return runs;
}

std::vector<size_t> select_for(const std::vector<InstanceRun>& runs, size_t per_label) {
    if (per_label > 0) return select_balanced(runs, per_label);
    std::vector<size_t> all(runs.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
}

int cmd_gen(const EnsembleConfig& cfg, const fs::path& out_dir) {
    const auto instances = generate_ensemble(cfg);
    fs::create_directories(out_dir);
    for (const auto& inst : instances)
        write_text(out_dir / (inst.id + ".cnf"), write_dimacs(inst.formula));
    nlohmann::ordered_json params;
    params["count"] = cfg.count;
    params["min_vars"] = cfg.min_vars;
    params["max_vars"] = cfg.max_vars;
    params["min_ratio"] = cfg.min_ratio;
    params["max_ratio"] = cfg.max_ratio;
    params["clause_size"] = cfg.clause_size;
    params["seed"] = cfg.seed;
    write_manifest(out_dir, "gen", params);
    std::cout << "wrote " << instances.size() << " instances to " << out_dir.string() << "\n";
    return 0;
}

int cmd_collect(const fs::path& in_dir, const fs::path& out_dir, const PipelineConfig& cfg,
                int jobs) {
    const auto instances = ingest_directory(in_dir);
    if (instances.empty()) throw std::runtime_error("no .cnf files in " + in_dir.string());
    const auto runs = collect(instances, cfg, jobs);
    fs::create_directories(out_dir);
    write_runs_csv(out_dir / "runs.csv", runs);
    write_feature_csv(out_dir / "features.csv", runs);
    if (cfg.record_estimates) write_estimates_csv(out_dir / "estimates.csv", runs);
    nlohmann::ordered_json params;
    params["in"] = in_dir.string();
    params["solver"] = solver_params(cfg.solver);
    if (cfg.fixed_window) {
        params["window_wait"] = cfg.fixed_window->wait;
        params["window_size"] = cfg.fixed_window->size;
    }
    params["record_estimates"] = cfg.record_estimates;
    write_manifest(out_dir, "collect", params);
    size_t solved = 0;
    for (const auto& r : runs)
        if (r.status != SolveStatus::budget_exhausted) ++solved;
    std::cout << "collected " << runs.size() << " runs (" << solved << " solved) into "
              << out_dir.string() << "\n";
    return 0;
}

int cmd_train(const fs::path& in_dir, const fs::path& out_file, uint64_t query_restart,
              const LmpTrainConfig& cfg, bool single) {
    const auto runs = load_collected(in_dir, false);
    std::vector<TrainRow> sat_rows, unsat_rows;
    for (const auto& run : runs) {
        if (run.status == SolveStatus::budget_exhausted) continue;
        for (const auto& w : run.windows) {
            if (w.restart_index != query_restart) continue;
            TrainRow row{run.id,
                         {w.features.values.begin(), w.features.values.end()},
                         std::log(static_cast<double>(run.total_conflicts))};
            (run.sat ? sat_rows : unsat_rows).push_back(std::move(row));
        }
    }
    std::vector<std::string> columns;
    for (const auto name : feature_names()) columns.emplace_back(name);
    if (single) {
        std::vector<TrainRow> rows = sat_rows;
        rows.insert(rows.end(), unsat_rows.begin(), unsat_rows.end());
        const RidgeModel model = train_single(rows, columns, cfg);
        write_text(out_file, to_document(model));
        std::cout << "trained single model on " << rows.size() << " rows -> "
                  << out_file.string() << "\n";
    } else {
        const LmpModelPair pair = train_pair(sat_rows, unsat_rows, columns, cfg);
        write_text(out_file, pair_to_document(pair));
        std::cout << "trained pair on " << sat_rows.size() << " sat + " << unsat_rows.size()
                  << " unsat rows -> " << out_file.string() << "\n";
    }
    return 0;
}

int cmd_evaluate(const fs::path& in_dir, const fs::path& out_dir, const EvaluateConfig& cfg,
                 size_t per_label) {
    const auto runs = load_collected(in_dir, false);
    const auto selection = select_for(runs, per_label);
    const EvaluateReport report = evaluate(runs, selection, cfg);
    fs::create_directories(out_dir);
    write_evaluate_csv(out_dir / "evaluate.csv", report, cfg.factors);
    nlohmann::ordered_json params;
    params["in"] = in_dir.string();
    params["query_restart"] = cfg.query_restart;
    params["per_label"] = per_label;
    params["folds"] = cfg.train.folds;
    params["fold_seed"] = cfg.train.fold_seed;
    params["factors"] = cfg.factors;
    write_manifest(out_dir, "evaluate", params);
    std::printf("%-12s %-6s %6s", "method", "label", "n");
    for (const double k : cfg.factors) std::printf("  x%-6g", k);
    std::printf("\n");
    for (const auto& row : report.rows) {
        std::printf("%-12s %-6s %6zu", row.method.c_str(), row.label.c_str(), row.n);
        for (const double pct : row.pct) std::printf("  %6.1f%%", pct);
        std::printf("\n");
    }
    return 0;
}

int cmd_chain(const fs::path& in_dir, const fs::path& out_dir, const ChainConfig& cfg) {
    const auto runs = load_collected(in_dir, false);
    const ChainReport report = chain_experiment(runs, cfg);
    fs::create_directories(out_dir);
    std::string csv = "final_restart,n,plain_pct,augmented_pct\n";
    csv += std::to_string(report.final_restart) + "," + std::to_string(report.n) + "," +
           format_double(report.plain_pct) + "," + format_double(report.augmented_pct) + "\n";
    write_text(out_dir / "chain.csv", csv);
    nlohmann::ordered_json params;
    params["in"] = in_dir.string();
    params["query_restarts"] = cfg.query_restarts;
    params["folds"] = cfg.train.folds;
    params["fold_seed"] = cfg.train.fold_seed;
    params["factor"] = cfg.factor;
    write_manifest(out_dir, "chain", params);
    std::printf("chain at restart %llu over %zu instances: plain %.1f%%, augmented %.1f%% (x%g)\n",
                static_cast<unsigned long long>(report.final_restart), report.n, report.plain_pct,
                report.augmented_pct, cfg.factor);
    return 0;
}

int cmd_curves(const fs::path& in_dir, const fs::path& out_dir, size_t per_label, int deciles) {
    const auto runs = load_collected(in_dir, true);
    const auto selection = select_for(runs, per_label);
    const CurveSeries wbe = mean_log_ratio_curve(runs, selection, EstimateMethod::wbe, deciles);
    const CurveSeries pb = mean_log_ratio_curve(runs, selection, EstimateMethod::pb, deciles);
    fs::create_directories(out_dir);
    write_curves_csv(out_dir / "curves.csv", wbe, pb);
    nlohmann::ordered_json params;
    params["in"] = in_dir.string();
    params["per_label"] = per_label;
    params["deciles"] = deciles;
    write_manifest(out_dir, "curves", params);
    std::printf("%-6s %6s %8s %14s\n", "method", "decile", "n", "mean_log_ratio");
    for (int d = 0; d < deciles; ++d)
        std::printf("%-6s %6d %8zu %14.4f\n", "wbe", d + 1, wbe.counts[static_cast<size_t>(d)],
                    wbe.mean_log_ratio[static_cast<size_t>(d)]);
    for (int d = 0; d < deciles; ++d)
        std::printf("%-6s %6d %8zu %14.4f\n", "pb", d + 1, pb.counts[static_cast<size_t>(d)],
                    pb.mean_log_ratio[static_cast<size_t>(d)]);
    return 0;
}

int cmd_portfolio(const fs::path& in_dir, const fs::path& out_dir, const PortfolioConfig& cfg) {
    const auto instances = ingest_directory(in_dir);
    if (instances.empty()) throw std::runtime_error("no .cnf files in " + in_dir.string());
    const PortfolioReport report = portfolio_experiment(instances, cfg);
    fs::create_directories(out_dir);
    write_portfolio_csv(out_dir / "portfolio.csv", report);
    write_text(out_dir / "models_a.json", pair_to_document(report.models_a));
    write_text(out_dir / "models_b.json", pair_to_document(report.models_b));
    nlohmann::ordered_json params;
    params["in"] = in_dir.string();
    params["solver_a"] = solver_params(cfg.race.solver_a);
    params["solver_b"] = solver_params(cfg.race.solver_b);
    params["query_restart_a"] = cfg.race.query_restart_a;
    params["query_restart_b"] = cfg.race.query_restart_b;
    params["split_seed"] = cfg.split_seed;
    params["folds"] = cfg.train.regress.folds;
    params["fold_seed"] = cfg.train.regress.fold_seed;
    write_manifest(out_dir, "portfolio", params);
    std::printf("%-6s %-10s %6s %14s %14s %14s %8s %8s\n", "label", "strategy", "n", "baseline",
                "without", "with", "impr-/%", "impr+/%");
    for (const auto& row : report.rows)
        std::printf("%-6s %-10s %6zu %14.0f %14.0f %14.0f %8.2f %8.2f\n", row.label.c_str(),
                    row.strategy.c_str(), row.n, row.baseline_total, row.strategy_total_without,
                    row.strategy_total_with, row.improvement_without, row.improvement_with);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online SAT search-cost prediction workbench"};
    app.require_subcommand(1);

    // gen ---------------------------------------------------------------
    EnsembleConfig gen_cfg;
    std::string gen_out = "data/instances";
    auto* gen = app.add_subcommand("gen", "generate a seeded random 3-SAT ensemble");
    gen->set_config("--config");
    gen->add_option("--count", gen_cfg.count, "instances to generate")->capture_default_str();
    gen->add_option("--min-vars", gen_cfg.min_vars)->capture_default_str();
    gen->add_option("--max-vars", gen_cfg.max_vars)->capture_default_str();
    gen->add_option("--min-ratio", gen_cfg.min_ratio)->capture_default_str();
    gen->add_option("--max-ratio", gen_cfg.max_ratio)->capture_default_str();
    gen->add_option("--clause-size", gen_cfg.clause_size)->capture_default_str();
    gen->add_option("--seed", gen_cfg.seed)->capture_default_str();
    gen->add_option("--out", gen_out, "output directory")->capture_default_str();

    // collect -------------------------------------------------------------
    std::string collect_in, collect_out = "data/collected";
    PipelineConfig collect_cfg;
    uint64_t window_wait = 500, window_size = 1500;
    bool no_restarts = false, no_estimates = false;
    int collect_jobs = 1;
    auto* col = app.add_subcommand("collect", "solve an instance directory, recording features "
                                              "and estimate streams");
    col->set_config("--config");
    col->add_option("--in", collect_in, "directory of .cnf files")->required();
    col->add_option("--out", collect_out)->capture_default_str();
    col->add_option("--jobs", collect_jobs, "parallel instances")->capture_default_str();
    col->add_flag("--no-restarts", no_restarts, "disable restarts (fixed observation window)");
    col->add_option("--restart-base", collect_cfg.solver.restart_base)->capture_default_str();
    col->add_option("--restart-factor", collect_cfg.solver.restart_factor)->capture_default_str();
    col->add_option("--budget", collect_cfg.solver.conflict_budget, "conflict budget");
    col->add_option("--window-wait", window_wait, "fixed-window wait (no-restart mode)")
        ->capture_default_str();
    col->add_option("--window-size", window_size, "fixed-window size (no-restart mode)")
        ->capture_default_str();
    col->add_flag("--no-estimates", no_estimates, "skip the per-gate estimate stream");

    // train ---------------------------------------------------------------
    std::string train_in, train_out = "model.json";
    uint64_t train_query = 0;
    LmpTrainConfig train_cfg;
    bool train_single_flag = false;
    auto* tr = app.add_subcommand("train", "train a sat/unsat model pair from collected data");
    tr->set_config("--config");
    tr->add_option("--in", train_in, "collect output directory")->required();
    tr->add_option("--out", train_out, "model document file")->capture_default_str();
    tr->add_option("--query-restart", train_query)->capture_default_str();
    tr->add_option("--folds", train_cfg.regress.folds)->capture_default_str();
    tr->add_option("--seed", train_cfg.regress.fold_seed, "fold shuffle seed")
        ->capture_default_str();
    tr->add_option("--max-instances", train_cfg.max_training_instances)->capture_default_str();
    tr->add_flag("--single", train_single_flag, "one mixed-label model instead of a pair");

    // evaluate --------------------------------------------------------------
    std::string eval_in, eval_out = "reports";
    EvaluateConfig eval_cfg;
    size_t eval_per_label = 0;
    std::vector<uint64_t> chain_restarts;
    double chain_factor = 2.0;
    auto* ev = app.add_subcommand("evaluate", "error-factor tables (or the restart-chaining "
                                              "comparison with --chain-restarts)");
    ev->set_config("--config");
    ev->add_option("--in", eval_in, "collect output directory")->required();
    ev->add_option("--out", eval_out, "report directory")->capture_default_str();
    ev->add_option("--query-restart", eval_cfg.query_restart)->capture_default_str();
    ev->add_option("--per-label", eval_per_label, "balanced selection size (0 = all)")
        ->capture_default_str();
    ev->add_option("--folds", eval_cfg.train.folds)->capture_default_str();
    ev->add_option("--seed", eval_cfg.train.fold_seed, "fold shuffle seed")->capture_default_str();
    ev->add_option("--factors", eval_cfg.factors, "error factors")->capture_default_str();
    ev->add_option("--chain-restarts", chain_restarts,
                   "ascending query restarts; evaluates history-augmented vs plain at the last");
    ev->add_option("--chain-factor", chain_factor, "error factor for the chain comparison")
        ->capture_default_str();

    // curves ---------------------------------------------------------------
    std::string curves_in, curves_out = "reports";
    size_t curves_per_label = 0;
    int curves_deciles = 10;
    auto* cu = app.add_subcommand("curves", "mean log(estimate/truth) over normalized time");
    cu->set_config("--config");
    cu->add_option("--in", curves_in, "collect output directory")->required();
    cu->add_option("--out", curves_out)->capture_default_str();
    cu->add_option("--per-label", curves_per_label, "balanced selection size (0 = all)")
        ->capture_default_str();
    cu->add_option("--deciles", curves_deciles)->capture_default_str();

    // portfolio --------------------------------------------------------------
    std::string pf_in, pf_out = "reports";
    PortfolioConfig pf_cfg;
    auto* pf = app.add_subcommand("portfolio", "two-config race with model-based selection");
    pf->set_config("--config");
    pf->add_option("--in", pf_in, "directory of .cnf files")->required();
    pf->add_option("--out", pf_out)->capture_default_str();
    pf->add_option("--jobs", pf_cfg.jobs)->capture_default_str();
    pf->add_option("--seed", pf_cfg.split_seed, "train/test split seed")->capture_default_str();
    pf->add_option("--base-a", pf_cfg.race.solver_a.restart_base)->capture_default_str();
    pf->add_option("--base-b", pf_cfg.race.solver_b.restart_base)->capture_default_str();
    pf->add_option("--factor-a", pf_cfg.race.solver_a.restart_factor)->capture_default_str();
    pf->add_option("--factor-b", pf_cfg.race.solver_b.restart_factor)->capture_default_str();
    pf->add_option("--query-a", pf_cfg.race.query_restart_a)->capture_default_str();
    pf->add_option("--query-b", pf_cfg.race.query_restart_b)->capture_default_str();
    pf->add_option("--budget", pf_cfg.race.solver_a.conflict_budget, "conflict budget per config");
    pf->add_option("--folds", pf_cfg.train.regress.folds)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_cfg, gen_out);
        if (col->parsed()) {
            collect_cfg.solver.restarts_enabled = !no_restarts;
            collect_cfg.record_estimates = !no_estimates;
            if (no_restarts) collect_cfg.fixed_window = WindowConfig{window_wait, window_size};
            return cmd_collect(collect_in, collect_out, collect_cfg, collect_jobs);
        }
        if (tr->parsed()) return cmd_train(train_in, train_out, train_query, train_cfg,
                                           train_single_flag);
        if (ev->parsed()) {
            if (!chain_restarts.empty()) {
                ChainConfig cfg;
                cfg.train = eval_cfg.train;
                cfg.query_restarts = chain_restarts;
                cfg.factor = chain_factor;
                return cmd_chain(eval_in, eval_out, cfg);
            }
            return cmd_evaluate(eval_in, eval_out, eval_cfg, eval_per_label);
        }
        if (cu->parsed()) return cmd_curves(curves_in, curves_out, curves_per_label,
                                            curves_deciles);
        if (pf->parsed()) {
            pf_cfg.race.solver_b.conflict_budget = pf_cfg.race.solver_a.conflict_budget;
            return cmd_portfolio(pf_in, pf_out, pf_cfg);
        }
    } catch (const ParseError& e) {
        std::cerr << "error (parse): " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error (io): " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error (data): " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        const bool io = what.starts_with("cannot ") || what.find(".csv") != std::string::npos;
        std::cerr << "error (" << (io ? "io" : "data") << "): " << what << "\n";
        return io ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error (internal): " << e.what() << "\n";
        return 4;
    }
    return 0;
}
