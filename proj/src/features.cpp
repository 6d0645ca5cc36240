#include "satcast/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace satcast {

std::optional<WindowConfig> window_for_restart(uint64_t conflict_limit) {
    const double s = static_cast<double>(conflict_limit);
    WindowConfig w;
    w.size = static_cast<uint64_t>(std::llround(std::max(1000.0, 0.01 * s)));
    w.wait = static_cast<uint64_t>(std::llround(std::max(500.0, 0.02 * s)));
    if (w.wait + w.size > conflict_limit) return std::nullopt;
    return w;
}

namespace {

constexpr std::string_view kNames[kFeatureCount] = {
    "init_var", "init_cls", "init_cls_per_var", "init_var_per_cls",
    "init_frac_binary", "init_frac_ternary", "init_avg_cls_size",
    "cls_per_var_min", "cls_per_var_max", "cls_per_var_avg", "cls_per_var_sd", "cls_per_var_last",
    "var_per_cls_min", "var_per_cls_max", "var_per_cls_avg", "var_per_cls_sd", "var_per_cls_last",
    "frac_binary_avg", "frac_binary_sd", "frac_binary_last",
    "frac_ternary_avg", "frac_ternary_sd", "frac_ternary_last",
    "avg_cls_size_avg", "avg_cls_size_sd", "avg_cls_size_last",
    "search_depth_max", "search_depth_avg", "search_depth_sd",
    "tree_depth_max", "tree_depth_avg", "tree_depth_sd",
    "backjump_size_max", "backjump_size_avg", "backjump_size_sd",
    "learnt_cls_size_min", "learnt_cls_size_max", "learnt_cls_size_avg", "learnt_cls_size_sd",
    "conflict_cls_size_min", "conflict_cls_size_max", "conflict_cls_size_avg", "conflict_cls_size_sd",
    "assigned_before_min", "assigned_before_max", "assigned_before_avg", "assigned_before_sd",
    "assigned_after_min", "assigned_after_max", "assigned_after_avg", "assigned_after_sd",
    "after_per_before_min", "after_per_before_max", "after_per_before_avg", "after_per_before_sd",
    "before_per_after_min", "before_per_after_max", "before_per_after_avg", "before_per_after_sd",
    "log_wbe_min", "log_wbe_max", "log_wbe_avg", "log_wbe_sd", "log_wbe_last",
};

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

std::span<const std::string_view> feature_names() { return kNames; }

int feature_index(std::string_view name) {
    for (int i = 0; i < kFeatureCount; ++i)
        if (kNames[i] == name) return i;
    return -1;
}

uint64_t feature_schema_hash() {
    uint64_t h = 1469598103934665603ull;  // FNV-1a over names joined by ','
    auto mix = [&h](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    };
    for (int i = 0; i < kFeatureCount; ++i) {
        if (i) mix(',');
        for (char c : kNames[i]) mix(c);
    }
    return h;
}

std::vector<double> impute_history(std::span<const std::pair<uint64_t, double>> available,
                                   uint64_t query_restart) {
    std::vector<double> history(query_restart, 0.0);
    if (available.empty() || query_restart == 0) return history;
    size_t next = 0;
    double current = available.front().second;  // slots before the first prediction borrow it
    for (uint64_t slot = 0; slot < query_restart; ++slot) {
        while (next < available.size() && available[next].first <= slot)
            current = available[next++].second;
        history[slot] = current;
    }
    return history;
}

void WindowCollector::observe(const Observation& o) {
    conflicts_ += 1;
    const double vars = static_cast<double>(o.num_vars);
    const double cls = static_cast<double>(o.live_clauses);
    cls_per_var_.add(safe_div(cls, vars));
    var_per_cls_.add(safe_div(vars, cls));
    frac_binary_.add(safe_div(static_cast<double>(o.binary_clauses), cls));
    frac_ternary_.add(safe_div(static_cast<double>(o.ternary_clauses), cls));
    avg_cls_size_.add(safe_div(static_cast<double>(o.literal_sum), cls));
    search_depth_.add(o.decision_level);
    tree_depth_.add(o.tree_depth);
    backjump_size_.add(o.backjump_levels);
    learnt_size_.add(static_cast<double>(o.learnt_size));
    conflict_size_.add(static_cast<double>(o.conflict_size));
    const double before = safe_div(static_cast<double>(o.assigned_before), vars);
    const double after = safe_div(static_cast<double>(o.assigned_after), vars);
    assigned_before_.add(before);
    assigned_after_.add(after);
    after_per_before_.add(safe_div(after, before));
    before_per_after_.add(safe_div(before, after));
}

void WindowCollector::observe_log_tree_size(double log2_size) {
    log_wbe_.add(log2_size * std::numbers::ln2);
}

std::optional<FeatureVector> WindowCollector::finalize(const FormulaStats& init) const {
    if (conflicts_ == 0) return std::nullopt;
    FeatureVector v;
    double* out = v.values.data();
    *out++ = init.num_vars;
    *out++ = init.num_clauses;
    *out++ = init.clauses_per_var;
    *out++ = init.vars_per_clause;
    *out++ = init.frac_binary;
    *out++ = init.frac_ternary;
    *out++ = init.avg_clause_size;
    auto put5 = [&out](const RunningStat& s) {
        *out++ = s.min(); *out++ = s.max(); *out++ = s.mean(); *out++ = s.sd(); *out++ = s.last();
    };
    auto put_avg3 = [&out](const RunningStat& s) {
        *out++ = s.mean(); *out++ = s.sd(); *out++ = s.last();
    };
    auto put_max3 = [&out](const RunningStat& s) {
        *out++ = s.max(); *out++ = s.mean(); *out++ = s.sd();
    };
    auto put4 = [&out](const RunningStat& s) {
        *out++ = s.min(); *out++ = s.max(); *out++ = s.mean(); *out++ = s.sd();
    };
    put5(cls_per_var_);
    put5(var_per_cls_);
    put_avg3(frac_binary_);
    put_avg3(frac_ternary_);
    put_avg3(avg_cls_size_);
    put_max3(search_depth_);
    put_max3(tree_depth_);
    put_max3(backjump_size_);
    put4(learnt_size_);
    put4(conflict_size_);
    put4(assigned_before_);
    put4(assigned_after_);
    put4(after_per_before_);
    put4(before_per_after_);
    put5(log_wbe_);
    return v;
}

}  // namespace satcast
