// Python bindings for the core operations: formula generation and parsing,
// the deterministic CDCL solver, the online estimation pipeline, ridge
// training/evaluation, and the small report helpers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "satcast/harness.hpp"

namespace py = pybind11;
using namespace satcast;

namespace {

std::string_view status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::sat: return "sat";
        case SolveStatus::unsat: return "unsat";
        case SolveStatus::budget_exhausted: return "budget_exhausted";
    }
    return "?";
}

std::vector<TrainRow> make_rows(const std::vector<std::tuple<std::string, std::vector<double>,
                                                             double>>& rows) {
    std::vector<TrainRow> out;
    out.reserve(rows.size());
    for (const auto& [id, x, y] : rows) out.push_back({id, x, y});
    return out;
}

}  // namespace

PYBIND11_MODULE(satcast, m) {
    m.doc() = "online SAT search-cost prediction workbench";

    py::class_<Formula>(m, "Formula")
        .def_readonly("num_vars", &Formula::num_vars)
        .def_property_readonly("num_clauses",
                               [](const Formula& f) { return f.clauses.size(); })
        .def("__repr__", [](const Formula& f) {
            std::ostringstream ss;
            ss << "Formula(num_vars=" << f.num_vars << ", num_clauses=" << f.clauses.size() << ")";
            return ss.str();
        });

    m.def(
        "generate_random_ksat",
        [](int num_vars, double clause_ratio, int clause_size, uint64_t seed) {
            GeneratorConfig cfg;
            cfg.num_vars = num_vars;
            cfg.clause_ratio = clause_ratio;
            cfg.clause_size = clause_size;
            cfg.seed = seed;
            return generate_random_ksat(cfg);
        },
        py::arg("num_vars"), py::arg("clause_ratio"), py::arg("clause_size") = 3,
        py::arg("seed") = 0, "Seeded uniform random k-SAT formula.");

    m.def(
        "parse_dimacs",
        [](const std::string& text) {
            std::istringstream in(text);
            return parse_dimacs(in).formula;
        },
        py::arg("text"), "Parse a DIMACS CNF document.");

    m.def(
        "write_dimacs", [](const Formula& f) { return write_dimacs(f); }, py::arg("formula"),
        "Render a formula as a DIMACS CNF document.");

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init([](bool restarts_enabled, uint64_t restart_base, double restart_factor,
                         double var_decay, uint64_t clause_db_cap, uint64_t conflict_budget) {
                 SolverConfig cfg;
                 cfg.restarts_enabled = restarts_enabled;
                 cfg.restart_base = restart_base;
                 cfg.restart_factor = restart_factor;
                 cfg.var_decay = var_decay;
                 cfg.clause_db_cap = clause_db_cap;
                 cfg.conflict_budget = conflict_budget;
                 return cfg;
             }),
             py::arg("restarts_enabled") = true, py::arg("restart_base") = 100,
             py::arg("restart_factor") = 1.5, py::arg("var_decay") = 0.95,
             py::arg("clause_db_cap") = 0, py::arg("conflict_budget") = kUnlimited)
        .def_readwrite("restarts_enabled", &SolverConfig::restarts_enabled)
        .def_readwrite("restart_base", &SolverConfig::restart_base)
        .def_readwrite("restart_factor", &SolverConfig::restart_factor)
        .def_readwrite("var_decay", &SolverConfig::var_decay)
        .def_readwrite("clause_db_cap", &SolverConfig::clause_db_cap)
        .def_readwrite("conflict_budget", &SolverConfig::conflict_budget);

    py::class_<SolveOutcome>(m, "SolveOutcome")
        .def_property_readonly("status",
                               [](const SolveOutcome& o) { return std::string(status_name(o.status)); })
        .def_readonly("total_conflicts", &SolveOutcome::total_conflicts)
        .def_readonly("total_decisions", &SolveOutcome::total_decisions)
        .def_readonly("total_propagations", &SolveOutcome::total_propagations)
        .def_readonly("per_restart_conflicts", &SolveOutcome::per_restart_conflicts)
        .def_readonly("model", &SolveOutcome::model);

    m.def(
        "solve",
        [](const Formula& f, const SolverConfig& cfg) { return solve(f, cfg); }, py::arg("formula"),
        py::arg("config") = SolverConfig{},
        "One-shot CDCL solve; deterministic for a given formula and config.");

    m.def("restart_schedule", &restart_schedule, py::arg("config"), py::arg("index"),
          "Scheduled conflict limit of a restart index.");

    py::class_<WindowConfig>(m, "WindowConfig")
        .def(py::init([](uint64_t wait, uint64_t size) { return WindowConfig{wait, size}; }),
             py::arg("wait"), py::arg("size"))
        .def_readwrite("wait", &WindowConfig::wait)
        .def_readwrite("size", &WindowConfig::size);

    m.def("window_for_restart", &window_for_restart, py::arg("restart_limit"),
          "Observation window derived from a restart's conflict limit, if it fits.");

    m.def("feature_names", [] {
        std::vector<std::string> names;
        for (const auto name : feature_names()) names.emplace_back(name);
        return names;
    });
    m.def("feature_schema_hash", &feature_schema_hash);

    py::class_<EstimatePoint>(m, "EstimatePoint")
        .def_readonly("conflict_index", &EstimatePoint::conflict_index)
        .def_readonly("restart_index", &EstimatePoint::restart_index)
        .def_readonly("log2_tree_size", &EstimatePoint::log2_tree_size)
        .def_readonly("log2_total_cost", &EstimatePoint::log2_total_cost)
        .def_readonly("pb_total", &EstimatePoint::pb_total);

    py::class_<WindowResult>(m, "WindowResult")
        .def_readonly("restart_index", &WindowResult::restart_index)
        .def_readonly("closed_at_conflict", &WindowResult::closed_at_conflict)
        .def_readonly("log2_wbe_total", &WindowResult::log2_wbe_total)
        .def_readonly("pb_total", &WindowResult::pb_total)
        .def_property_readonly("features", [](const WindowResult& w) {
            return std::vector<double>(w.features.values.begin(), w.features.values.end());
        });

    py::class_<PipelineResult>(m, "PipelineResult")
        .def_readonly("outcome", &PipelineResult::outcome)
        .def_readonly("windows", &PipelineResult::windows)
        .def_readonly("estimates", &PipelineResult::estimates);

    m.def(
        "run_pipeline",
        [](const Formula& f, const SolverConfig& solver,
           std::optional<std::pair<uint64_t, uint64_t>> fixed_window, bool record_estimates) {
            PipelineConfig cfg;
            cfg.solver = solver;
            if (fixed_window) cfg.fixed_window = WindowConfig{fixed_window->first, fixed_window->second};
            cfg.record_estimates = record_estimates;
            return run_pipeline(f, cfg);
        },
        py::arg("formula"), py::arg("solver") = SolverConfig{},
        py::arg("fixed_window") = std::nullopt, py::arg("record_estimates") = true,
        "Solve while running the estimators and observation windows.");

    py::class_<RidgeModel>(m, "RidgeModel")
        .def_property_readonly("lambda_", [](const RidgeModel& m_) { return m_.lambda; })
        .def_property_readonly("retained", [](const RidgeModel& m_) { return m_.retained; })
        .def("predict", [](const RidgeModel& m_, const std::vector<double>& row) {
            return m_.predict(row);
        })
        .def("__eq__", [](const RidgeModel& a, const RidgeModel& b) { return a == b; });

    m.def("to_document", [](const RidgeModel& m_) { return to_document(m_); });
    m.def("model_from_document", [](const std::string& doc, const std::vector<std::string>& columns) {
        RidgeModel m_ = model_from_document(doc);
        m_.rebind(columns);
        return m_;
    });

    m.def(
        "train_model",
        [](const std::vector<std::tuple<std::string, std::vector<double>, double>>& rows,
           const std::vector<std::string>& columns, int folds, uint64_t fold_seed) {
            TrainConfig cfg;
            cfg.folds = folds;
            cfg.fold_seed = fold_seed;
            return train_model(make_rows(rows), columns, cfg);
        },
        py::arg("rows"), py::arg("columns"), py::arg("folds") = 10, py::arg("fold_seed") = 0,
        "Ridge fit with lambda selection, AIC elimination and VIF pruning; rows are "
        "(instance_id, x, y) with natural-log targets.");

    m.def(
        "cross_validate",
        [](const std::vector<std::tuple<std::string, std::vector<double>, double>>& rows,
           const std::vector<std::string>& columns, int folds, uint64_t fold_seed) {
            TrainConfig cfg;
            cfg.folds = folds;
            cfg.fold_seed = fold_seed;
            const CvResult result = cross_validate(make_rows(rows), columns, cfg);
            return py::make_tuple(result.predictions, result.fold_of_row);
        },
        py::arg("rows"), py::arg("columns"), py::arg("folds") = 10, py::arg("fold_seed") = 0,
        "Instance-disjoint CV; returns (out_of_fold_predictions, fold_of_row).");

    m.def(
        "error_factor",
        [](const std::vector<double>& preds, const std::vector<double>& truths, double k) {
            return error_factor(preds, truths, k);
        },
        py::arg("preds"), py::arg("truths"), py::arg("k"),
        "Percentage of predictions within multiplicative factor k of the truth.");
}
