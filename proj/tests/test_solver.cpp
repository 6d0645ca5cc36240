#include <sstream>
#include <variant>

#include "doctest.h"
#include "oracles.hpp"
#include "satcast/solver.hpp"
#include "satcast/trace_io.hpp"

using namespace satcast;

namespace {

Formula random_formula(uint64_t seed, int vars = 10, double ratio = 4.3) {
    GeneratorConfig cfg;
    cfg.num_vars = vars;
    cfg.clause_ratio = ratio;
    cfg.seed = seed;
    return generate_random_ksat(cfg);
}

}  // namespace

TEST_SUITE("solver") {
    TEST_CASE("agrees with the truth table on random formulas") {
        for (uint64_t seed = 0; seed < 120; ++seed) {
            const Formula f = random_formula(seed);
            const bool expected = oracles::ref_satisfiable(f);
            for (const bool restarts : {false, true}) {
                SolverConfig cfg;
                cfg.restarts_enabled = restarts;
                cfg.restart_base = 8;  // force many restarts on these small instances
                const SolveOutcome out = solve(f, cfg);
                REQUIRE(out.status != SolveStatus::budget_exhausted);
                CHECK((out.status == SolveStatus::sat) == expected);
                if (out.status == SolveStatus::sat) CHECK(oracles::verify_model(f, out.model));
            }
        }
    }

    TEST_CASE("learnt-clause eviction does not affect correctness") {
        for (uint64_t seed = 200; seed < 240; ++seed) {
            const Formula f = random_formula(seed, 12);
            SolverConfig cfg;
            cfg.clause_db_cap = 10;
            const SolveOutcome out = solve(f, cfg);
            REQUIRE(out.status != SolveStatus::budget_exhausted);
            CHECK((out.status == SolveStatus::sat) == oracles::ref_satisfiable(f));
        }
    }

    TEST_CASE("refutes pigeonhole formulas") {
        for (const int holes : {3, 4, 5}) {
            const Formula f = oracles::pigeonhole(holes);
            const SolveOutcome out = solve(f, SolverConfig{});
            CHECK(out.status == SolveStatus::unsat);
            CHECK(out.total_conflicts > 0);
        }
    }

    TEST_CASE("handles degenerate formulas") {
        Formula empty;
        empty.num_vars = 3;
        CHECK(solve(empty, SolverConfig{}).status == SolveStatus::sat);

        Formula unit;
        unit.num_vars = 1;
        unit.clauses = {oracles::make_clause({1}), oracles::make_clause({-1})};
        CHECK(solve(unit, SolverConfig{}).status == SolveStatus::unsat);

        Formula trivial;
        trivial.num_vars = 2;
        trivial.clauses = {oracles::make_clause({1, 2})};
        trivial.trivially_unsat = true;  // as if an empty clause had been read
        CHECK(solve(trivial, SolverConfig{}).status == SolveStatus::unsat);
    }

    TEST_CASE("identical config yields identical event streams") {
        const Formula f = random_formula(7, 14);
        oracles::Recorder a, b;
        EventObserver* oa[] = {&a};
        EventObserver* ob[] = {&b};
        const SolveOutcome ra = solve(f, SolverConfig{}, oa);
        const SolveOutcome rb = solve(f, SolverConfig{}, ob);
        CHECK(ra.status == rb.status);
        CHECK(ra.total_conflicts == rb.total_conflicts);
        CHECK(ra.total_decisions == rb.total_decisions);
        CHECK(ra.total_propagations == rb.total_propagations);
        REQUIRE(a.events.size() == b.events.size());
        CHECK(write_trace(a.events) == write_trace(b.events));
    }

    TEST_CASE("per-restart conflict counts sum to the total") {
        const Formula f = oracles::pigeonhole(5);
        SolverConfig cfg;
        cfg.restart_base = 10;
        cfg.restart_factor = 1.3;
        const SolveOutcome out = solve(f, cfg);
        REQUIRE(out.status == SolveStatus::unsat);
        CHECK(out.per_restart_conflicts.size() > 1);  // small base: must restart
        uint64_t sum = 0;
        for (const uint64_t c : out.per_restart_conflicts) sum += c;
        CHECK(sum == out.total_conflicts);
    }

    TEST_CASE("conflict budget stops the search") {
        const Formula f = oracles::pigeonhole(7);
        SolverConfig cfg;
        cfg.conflict_budget = 50;
        const SolveOutcome out = solve(f, cfg);
        CHECK(out.status == SolveStatus::budget_exhausted);
        CHECK(out.total_conflicts <= 50);
    }

    TEST_CASE("restart schedule rounds half away from zero and saturates") {
        SolverConfig cfg;
        cfg.restart_base = 100;
        cfg.restart_factor = 1.5;
        CHECK(restart_schedule(cfg, 0) == 100);
        CHECK(restart_schedule(cfg, 1) == 150);
        CHECK(restart_schedule(cfg, 2) == 225);
        CHECK(restart_schedule(cfg, 3) == 338);  // 337.5 rounds up
        CHECK(restart_schedule(cfg, 4) == 506);  // 506.25 rounds down
        CHECK(restart_schedule(cfg, 1000) == kUnlimited);

        cfg.restarts_enabled = false;
        CHECK(restart_schedule(cfg, 0) == kUnlimited);
    }

    TEST_CASE("event stream is locally well-formed") {
        const Formula f = random_formula(3, 12);
        oracles::Recorder rec;
        EventObserver* obs[] = {&rec};
        SolverConfig cfg;
        cfg.restart_base = 20;
        solve(f, cfg, obs);
        uint64_t next_restart_index = 1;
        bool conflict_open = false;
        for (const SearchEvent& e : rec.events) {
            if (const auto* c = std::get_if<ConflictEvent>(&e)) {
                CHECK(!conflict_open);
                conflict_open = true;
                CHECK(c->conflict_clause_size >= 1);
                CHECK(c->assigned_before >= 0);
            } else if (const auto* b = std::get_if<BackjumpEvent>(&e)) {
                CHECK(conflict_open);
                conflict_open = false;
                CHECK(b->to_level < b->from_level);
                CHECK(b->assigned_after <= f.num_vars);
            } else if (const auto* r = std::get_if<RestartEvent>(&e)) {
                CHECK(r->index == next_restart_index);
                ++next_restart_index;
            } else if (std::get_if<SolvedEvent>(&e)) {
                conflict_open = false;
            }
        }
    }

    TEST_CASE("trace round-trips through its text form") {
        const Formula f = random_formula(5, 12);
        oracles::Recorder rec;
        EventObserver* obs[] = {&rec};
        SolverConfig cfg;
        cfg.restart_base = 15;
        solve(f, cfg, obs);
        REQUIRE(!rec.events.empty());
        const std::string text = write_trace(rec.events);
        std::istringstream in(text);
        const std::vector<SearchEvent> back = read_trace(in);
        CHECK(write_trace(back) == text);
    }
}
