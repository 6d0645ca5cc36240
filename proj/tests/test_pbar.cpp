#include "doctest.h"
#include "satcast/pbar.hpp"

using namespace satcast;

namespace {

std::vector<BranchEntry> branch(std::initializer_list<std::pair<int, bool>> entries) {
    std::vector<BranchEntry> b;
    for (const auto& [level, closed] : entries) b.push_back({level, closed, 0});
    return b;
}

}  // namespace

TEST_SUITE("pbar") {
    TEST_CASE("no estimate until every open depth has history") {
        PbarEstimator pb;
        const auto open_two = branch({{1, false}, {2, false}});
        CHECK(!pb.estimate_remaining(open_two).has_value());
        pb.on_close({0, 10});
        CHECK(!pb.estimate_remaining(open_two).has_value());  // depth 1 still unknown
        pb.on_close({1, 4});
        const auto est = pb.estimate_remaining(open_two);
        REQUIRE(est.has_value());
        CHECK(*est == doctest::Approx(14.0));
    }

    TEST_CASE("closed entries owe nothing") {
        PbarEstimator pb;
        pb.on_close({0, 6});
        const auto mixed = branch({{1, false}, {2, true}, {2, true}});
        const auto est = pb.estimate_remaining(mixed);
        REQUIRE(est.has_value());
        CHECK(*est == doctest::Approx(6.0));  // only the open depth-0 entry counts
    }

    TEST_CASE("an empty branch means the tree is complete") {
        PbarEstimator pb;
        const auto est = pb.estimate_remaining({});
        REQUIRE(est.has_value());
        CHECK(*est == 0.0);
    }

    TEST_CASE("per-depth means blend exponentially with the first value as seed") {
        PbarEstimator pb(0.5);
        pb.on_close({3, 8});   // mean(3) = 8
        pb.on_close({3, 4});   // 0.5*8 + 0.5*4 = 6
        pb.on_close({3, 10});  // 0.5*6 + 0.5*10 = 8
        const auto est = pb.estimate_remaining(branch({{1, true}, {2, true}, {3, true}, {4, false}}));
        REQUIRE(est.has_value());
        CHECK(*est == doctest::Approx(8.0));
    }

    TEST_CASE("alpha weights fresh observations") {
        PbarEstimator pb(0.25);
        pb.on_close({0, 100});
        pb.on_close({0, 0});  // 0.75*100 + 0.25*0 = 75
        const auto est = pb.estimate_remaining(branch({{1, false}}));
        REQUIRE(est.has_value());
        CHECK(*est == doctest::Approx(75.0));
    }
}
