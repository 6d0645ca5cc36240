#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "satcast/cnf.hpp"
#include "satcast/stats.hpp"

namespace satcast {

// Placement of the observation window inside one restart, in conflicts.
struct WindowConfig {
    uint64_t wait;  // conflicts skipped after the restart begins
    uint64_t size;  // conflicts the window then spans
};

// Window for a restart with conflict limit s: size = max(1000, 1% of s),
// wait = max(500, 2% of s). Empty when the window cannot complete within s.
std::optional<WindowConfig> window_for_restart(uint64_t conflict_limit);

inline constexpr int kFeatureCount = 64;

// Canonical feature names, fixed order; the contract for vectors, CSV columns
// and persisted models.
std::span<const std::string_view> feature_names();
int feature_index(std::string_view name);  // -1 when unknown
uint64_t feature_schema_hash();            // FNV-1a over the joined names

struct FeatureVector {
    std::array<double, kFeatureCount> values{};

    double operator[](int i) const { return values[static_cast<size_t>(i)]; }
    bool operator==(const FeatureVector&) const = default;
};

// Per-restart prediction inputs: the window's features plus the predictions
// made at every earlier restart (natural-log conflict units).
struct AugmentedFeatureVector {
    FeatureVector base;
    std::vector<double> history;  // length == query restart index (0-based)
};

// Builds the history slots for a query at `query_restart` (0-based) from the
// predictions actually available at earlier restarts, sorted by restart
// index. Slots with no prediction yet are forward-filled from the most
// recent earlier one; slots before the first available prediction borrow it.
std::vector<double> impute_history(std::span<const std::pair<uint64_t, double>> available,
                                   uint64_t query_restart);

// Accumulates per-conflict statistics over one observation window.
class WindowCollector {
public:
    struct Observation {
        uint64_t live_clauses;    // load-time database plus learnt additions
        uint64_t binary_clauses;
        uint64_t ternary_clauses;
        uint64_t literal_sum;
        uint64_t num_vars;
        int decision_level;       // level the conflict occurred at
        int tree_depth;           // branch-stack depth at the conflict
        int backjump_levels;      // levels undone by the following backjump
        uint64_t learnt_size;
        uint64_t conflict_size;
        uint64_t assigned_before; // trail size at the conflict
        uint64_t assigned_after;  // trail size after the backjump
    };

    void observe(const Observation& o);
    // Gated sample of the current tree-size estimate, natural-log units.
    void observe_log_tree_size(double log2_size);

    uint64_t conflicts() const { return conflicts_; }
    bool has_tree_size_sample() const { return log_wbe_.count() > 0; }

    // 64 values in canonical order; empty when the window saw no conflicts.
    std::optional<FeatureVector> finalize(const FormulaStats& init) const;

private:
    uint64_t conflicts_ = 0;
    RunningStat cls_per_var_, var_per_cls_, frac_binary_, frac_ternary_, avg_cls_size_;
    RunningStat search_depth_, tree_depth_, backjump_size_;
    RunningStat learnt_size_, conflict_size_, assigned_before_, assigned_after_;
    RunningStat after_per_before_, before_per_after_;
    RunningStat log_wbe_;
};

}  // namespace satcast
