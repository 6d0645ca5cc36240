#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "satcast/features.hpp"

using namespace satcast;

namespace {

uint64_t fnv1a_joined(std::span<const std::string_view> names) {
    uint64_t h = 1469598103934665603ull;
    std::string joined;
    for (const auto name : names) {
        if (!joined.empty()) joined += ',';
        joined += name;
    }
    for (const char c : joined) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

TEST_SUITE("features") {
    TEST_CASE("observation window scales with the restart's conflict limit") {
        // size = max(1000, 1% of the limit); wait = max(500, 2% of the limit)
        const auto huge = window_for_restart(100000);
        REQUIRE(huge.has_value());
        CHECK(huge->size == 1000);
        CHECK(huge->wait == 2000);

        const auto larger = window_for_restart(200000);
        REQUIRE(larger.has_value());
        CHECK(larger->size == 2000);
        CHECK(larger->wait == 4000);

        CHECK(!window_for_restart(1200).has_value());  // floors exceed the limit
        const auto snug = window_for_restart(1500);
        REQUIRE(snug.has_value());  // wait 500 + size 1000 lands exactly on the limit
        CHECK(snug->wait == 500);
        CHECK(snug->size == 1000);
    }

    TEST_CASE("canonical feature order is frozen") {
        const auto names = feature_names();
        REQUIRE(names.size() == static_cast<size_t>(kFeatureCount));
        CHECK(kFeatureCount == 64);
        CHECK(names[0] == "init_var");
        CHECK(names[6] == "init_avg_cls_size");
        CHECK(names[7] == "cls_per_var_min");
        CHECK(names[26] == "search_depth_max");
        CHECK(names[29] == "tree_depth_max");
        CHECK(names[32] == "backjump_size_max");
        CHECK(names[35] == "learnt_cls_size_min");
        CHECK(names[59] == "log_wbe_min");
        CHECK(names[63] == "log_wbe_last");
        for (int i = 0; i < kFeatureCount; ++i)
            CHECK(feature_index(names[static_cast<size_t>(i)]) == i);
        CHECK(feature_index("not_a_feature") == -1);
    }

    TEST_CASE("schema hash follows the documented construction") {
        CHECK(feature_schema_hash() == fnv1a_joined(feature_names()));
        CHECK(feature_schema_hash() != 0);
    }

    TEST_CASE("window statistics match two-pass references") {
        WindowCollector c;
        // Three conflicts with hand-picked values.
        WindowCollector::Observation o{};
        o.num_vars = 100;

        o.live_clauses = 400;
        o.binary_clauses = 40;
        o.ternary_clauses = 300;
        o.literal_sum = 1240;
        o.decision_level = 12;
        o.tree_depth = 15;
        o.backjump_levels = 3;
        o.learnt_size = 5;
        o.conflict_size = 9;
        o.assigned_before = 50;
        o.assigned_after = 20;
        c.observe(o);

        o.live_clauses = 410;
        o.binary_clauses = 45;
        o.ternary_clauses = 302;
        o.literal_sum = 1275;
        o.decision_level = 20;
        o.tree_depth = 22;
        o.backjump_levels = 1;
        o.learnt_size = 2;
        o.conflict_size = 4;
        o.assigned_before = 80;
        o.assigned_after = 64;
        c.observe(o);

        c.observe_log_tree_size(10.0);  // natural log of 2^10 under the hood
        CHECK(c.has_tree_size_sample());
        CHECK(c.conflicts() == 2);

        FormulaStats init;
        init.num_vars = 100;
        init.num_clauses = 420;
        init.clauses_per_var = 4.2;
        init.vars_per_clause = 1.0 / 4.2;
        init.frac_binary = 0.05;
        init.frac_ternary = 0.9;
        init.avg_clause_size = 3.0;
        const auto fv = c.finalize(init);
        REQUIRE(fv.has_value());
        const auto& v = fv->values;

        CHECK(v[static_cast<size_t>(feature_index("init_var"))] == 100.0);
        CHECK(v[static_cast<size_t>(feature_index("init_cls"))] == 420.0);

        const auto ref_cpv = oracles::two_pass({4.0, 4.1});
        CHECK(v[static_cast<size_t>(feature_index("cls_per_var_min"))] == doctest::Approx(ref_cpv.min));
        CHECK(v[static_cast<size_t>(feature_index("cls_per_var_max"))] == doctest::Approx(ref_cpv.max));
        CHECK(v[static_cast<size_t>(feature_index("cls_per_var_avg"))] == doctest::Approx(ref_cpv.mean));
        CHECK(v[static_cast<size_t>(feature_index("cls_per_var_sd"))] == doctest::Approx(ref_cpv.sd));
        CHECK(v[static_cast<size_t>(feature_index("cls_per_var_last"))] == doctest::Approx(4.1));

        const auto ref_sd = oracles::two_pass({12.0, 20.0});
        CHECK(v[static_cast<size_t>(feature_index("search_depth_max"))] == doctest::Approx(20.0));
        CHECK(v[static_cast<size_t>(feature_index("search_depth_avg"))] == doctest::Approx(ref_sd.mean));
        CHECK(v[static_cast<size_t>(feature_index("search_depth_sd"))] == doctest::Approx(ref_sd.sd));

        // Assignment counts become fractions of the variable count.
        const auto ref_ab = oracles::two_pass({0.5, 0.8});
        CHECK(v[static_cast<size_t>(feature_index("assigned_before_avg"))] == doctest::Approx(ref_ab.mean));
        const auto ref_ratio = oracles::two_pass({0.4, 0.8});
        CHECK(v[static_cast<size_t>(feature_index("after_per_before_min"))] == doctest::Approx(0.4));
        CHECK(v[static_cast<size_t>(feature_index("after_per_before_avg"))] ==
              doctest::Approx(ref_ratio.mean));

        // The tree-size stream is kept in natural logs.
        CHECK(v[static_cast<size_t>(feature_index("log_wbe_avg"))] ==
              doctest::Approx(10.0 * std::numbers::ln2));
        CHECK(v[static_cast<size_t>(feature_index("log_wbe_sd"))] == doctest::Approx(0.0));
    }

    TEST_CASE("ratio features guard division by zero") {
        WindowCollector c;
        WindowCollector::Observation o{};
        o.num_vars = 10;
        o.live_clauses = 0;  // everything satisfied/erased: ratios collapse to 0
        o.assigned_before = 0;
        o.assigned_after = 5;
        c.observe(o);
        FormulaStats init;
        const auto fv = c.finalize(init);
        REQUIRE(fv.has_value());
        CHECK(fv->values[static_cast<size_t>(feature_index("cls_per_var_last"))] == 0.0);
        CHECK(fv->values[static_cast<size_t>(feature_index("avg_cls_size_last"))] == 0.0);
        CHECK(fv->values[static_cast<size_t>(feature_index("after_per_before_max"))] == 0.0);
    }

    TEST_CASE("an empty window produces no feature vector") {
        WindowCollector c;
        CHECK(!c.finalize(FormulaStats{}).has_value());
    }

    TEST_CASE("history imputation forward-fills and backfills") {
        using Avail = std::vector<std::pair<uint64_t, double>>;

        // Nothing available: all zeros (dropped later as zero-variance).
        CHECK(impute_history(Avail{}, 3) == std::vector<double>{0.0, 0.0, 0.0});

        // Missing leading slots borrow the first available prediction.
        const Avail late{{2, 5.0}};
        CHECK(impute_history(late, 4) == std::vector<double>{5.0, 5.0, 5.0, 5.0});

        // Interior gaps carry the last value forward.
        const Avail gappy{{0, 1.0}, {3, 4.0}};
        CHECK(impute_history(gappy, 5) == std::vector<double>{1.0, 1.0, 1.0, 4.0, 4.0});

        // Exact history needs no imputation at all.
        const Avail full{{0, 1.0}, {1, 2.0}, {2, 3.0}};
        CHECK(impute_history(full, 3) == std::vector<double>{1.0, 2.0, 3.0});

        CHECK(impute_history(full, 0).empty());
    }
}
