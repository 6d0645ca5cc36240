#include <cmath>
#include <variant>

#include "doctest.h"
#include "oracles.hpp"
#include "satcast/wbe.hpp"

using namespace satcast;

namespace {

// Runs a full exploration trace through tracker + estimator, checking the
// incremental estimate against the direct weighted form over the oracle
// multiset after every conflict. Returns the final (terminal) estimate.
TreeSizeEstimate run_and_check(const oracles::DfsTrace& trace, double tol = 1e-9) {
    BranchTracker tracker;
    WbeEstimator wbe;
    size_t conflicts_seen = 0;
    TreeSizeEstimate last{};
    for (size_t i = 0; i < trace.events.size(); ++i) {
        const SearchEvent& e = trace.events[i];
        if (std::holds_alternative<DecideEvent>(e)) {
            tracker.on_decide(std::get<DecideEvent>(e).level);
            continue;
        }
        if (std::holds_alternative<ConflictEvent>(e)) {
            tracker.on_conflict();
            continue;
        }
        if (std::holds_alternative<BackjumpEvent>(e)) {
            wbe.observe(tracker.on_backjump(std::get<BackjumpEvent>(e).to_level));
        } else if (std::holds_alternative<SolvedEvent>(e)) {
            wbe.observe_terminal();
        } else {
            continue;
        }
        ++conflicts_seen;
        const std::span<const int> so_far(trace.leaf_depths.data(), conflicts_seen);
        last = wbe.tree_size();
        const double direct = direct_log2_tree_size(so_far);
        CHECK(std::abs(last.log2_size - direct) <= tol);
    }
    CHECK(conflicts_seen == trace.leaf_depths.size());
    return last;
}

}  // namespace

TEST_SUITE("wbe") {
    TEST_CASE("incremental estimate equals the direct weighted form at every conflict") {
        Rng rng(41);
        for (int trial = 0; trial < 120; ++trial) {
            const auto tree = oracles::make_tree(rng, 2 + static_cast<int>(rng.below(80)));
            run_and_check(oracles::emit_dfs(tree));
        }
        // Deep unbalanced spines stress the log-domain subtraction path.
        for (const int levels : {5, 23, 55}) run_and_check(oracles::emit_dfs(oracles::make_spine(levels)));
    }

    TEST_CASE("exhaustive exploration ends at the exact node count") {
        Rng rng(42);
        for (int trial = 0; trial < 40; ++trial) {
            const int leaves = 2 + static_cast<int>(rng.below(300));
            const auto tree = oracles::make_tree(rng, leaves);
            const TreeSizeEstimate last = run_and_check(oracles::emit_dfs(tree));
            REQUIRE(last.exact.has_value());
            CHECK(*last.exact == tree.node_count());
        }
    }

    TEST_CASE("first conflict estimates the complete tree of its depth") {
        // A single closed leaf at depth d weighs the tree at 2^(d+1) - 1.
        for (const int depth : {1, 2, 5, 17}) {
            BranchTracker t;
            WbeEstimator wbe;
            for (int level = 1; level <= depth; ++level) t.on_decide(level);
            t.on_conflict();
            wbe.observe(t.on_backjump(depth - 1));
            const TreeSizeEstimate est = wbe.tree_size();
            REQUIRE(est.exact.has_value());
            CHECK(*est.exact == (uint64_t{1} << (depth + 1)) - 1);
        }
    }

    TEST_CASE("the two-variable exhaustive trace ends at exactly seven nodes") {
        BranchTracker t;
        WbeEstimator wbe;
        t.on_decide(1);
        t.on_decide(2);
        t.on_conflict();
        wbe.observe(t.on_backjump(1));
        CHECK(*wbe.tree_size().exact == 7);  // one depth-2 leaf: complete depth-2 tree
        t.on_conflict();
        wbe.observe(t.on_backjump(0));
        t.on_decide(1);
        t.on_conflict();
        wbe.observe(t.on_backjump(0));
        t.on_conflict();
        wbe.observe_terminal();
        CHECK(wbe.conflicts() == 4);
        CHECK(wbe.log2_mass() == 0.0);
        CHECK(*wbe.tree_size().exact == 7);
    }

    TEST_CASE("restart clears the estimator") {
        BranchTracker t;
        WbeEstimator wbe;
        t.on_decide(1);
        t.on_conflict();
        wbe.observe(t.on_backjump(0));
        CHECK(wbe.has_estimate());
        wbe.on_restart();
        t.on_restart();
        CHECK(!wbe.has_estimate());
        CHECK_THROWS_AS(wbe.tree_size(), std::logic_error);
    }

    TEST_CASE("a branch two thousand levels deep stays finite in the log domain") {
        BranchTracker t;
        WbeEstimator wbe;
        const int depth = 2000;
        for (int level = 1; level <= depth; ++level) t.on_decide(level);
        t.on_conflict();
        wbe.observe(t.on_backjump(depth - 1));
        const TreeSizeEstimate est = wbe.tree_size();
        CHECK(std::isfinite(est.log2_size));
        CHECK(!est.exact.has_value());
        CHECK(est.log2_size == doctest::Approx(2001.0).epsilon(1e-9));

        SolverConfig schedule;
        const CostEstimate cost = estimate_total_cost(wbe, schedule, {}, 0);
        CHECK(std::isfinite(cost.log2_total_conflicts));
        CHECK(cost.log2_total_conflicts == doctest::Approx(2000.0).epsilon(1e-6));
    }

    TEST_CASE("direct form matches linear arithmetic while it fits") {
        const std::vector<std::vector<int>> cases{{0}, {3}, {2, 2}, {1, 4, 4, 2}, {5, 5, 5, 1}};
        for (const auto& depths : cases) {
            const double linear = oracles::direct_estimate_linear(depths);
            CHECK(direct_log2_tree_size(depths) == doctest::Approx(std::log2(linear)).epsilon(1e-12));
        }
    }

    TEST_CASE("cost projection walks the restart schedule") {
        SolverConfig schedule;  // base 100, factor 1.5: limits 100 150 225 338 506 759...
        const std::vector<uint64_t> spent{100, 150, 225, 338};

        SUBCASE("remainder fits the current restart") {
            const CostEstimate est = project_total_cost(400, schedule, spent, 4);
            CHECK(est.restart_index_needed == 4);
            CHECK(est.log2_total_conflicts == doctest::Approx(std::log2(1213.0)).epsilon(1e-12));
        }
        SUBCASE("remainder overflows into the next restart") {
            const CostEstimate est = project_total_cost(600, schedule, spent, 4);
            CHECK(est.restart_index_needed == 5);
            // 813 past + 506 abandoned + 600 in the restart that fits
            CHECK(est.log2_total_conflicts == doctest::Approx(std::log2(1919.0)).epsilon(1e-12));
        }
        SUBCASE("no restarts: everything lands in the unlimited restart") {
            SolverConfig plain;
            plain.restarts_enabled = false;
            const CostEstimate est = project_total_cost(12345, plain, {}, 0);
            CHECK(est.restart_index_needed == 0);
            CHECK(est.log2_total_conflicts == doctest::Approx(std::log2(12345.0)));
        }
        SUBCASE("an astronomically large remainder still terminates") {
            WbeEstimator wbe;
            BranchTracker t;
            for (int level = 1; level <= 700; ++level) t.on_decide(level);
            t.on_conflict();
            wbe.observe(t.on_backjump(699));
            const CostEstimate est = estimate_total_cost(wbe, schedule, spent, 4);
            CHECK(std::isfinite(est.log2_total_conflicts));
            CHECK(est.log2_total_conflicts > 600.0);
            CHECK(restart_schedule(schedule, est.restart_index_needed) == kUnlimited);
        }
    }

    TEST_CASE("projection never drops below the conflicts already spent") {
        // 15 conflicts into a tree currently estimated smaller than the spend.
        BranchTracker t;
        WbeEstimator wbe;
        t.on_decide(1);
        t.on_decide(2);
        t.on_conflict();
        wbe.observe(t.on_backjump(1));
        SolverConfig schedule;
        const CostEstimate est = estimate_total_cost(wbe, schedule, {}, 0);
        // One conflict so far: the projection charges at least... the leaves
        // the estimate implies: (7+1)/2 = 4.
        CHECK(est.log2_total_conflicts == doctest::Approx(2.0));
        CHECK(est.restart_index_needed == 0);
    }

    TEST_CASE("sampling gate fires after as many conflicts as the leaf was deep") {
        CHECK(!sampling_due(0, 0));
        CHECK(sampling_due(1, 0));
        CHECK(sampling_due(1, 1));
        CHECK(!sampling_due(2, 3));
        CHECK(sampling_due(3, 3));
        CHECK(sampling_due(9, 3));
    }
}
