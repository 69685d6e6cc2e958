#include "doctest.h"

#include <functional>
#include <set>

#include "cbmspares/state_space.hpp"
#include "support.hpp"

using namespace cbmspares;
using test_support::params_for;
using test_support::two_by_two;

namespace {

// brute-force count of (F, P, C, j) with sum(F + P) = K
std::uint64_t brute_count(int I, int J, int K, int N) {
    std::uint64_t fp = 0;
    std::vector<int> v(static_cast<std::size_t>(2 * I), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
        if (pos + 1 == v.size()) {
            ++fp;
            return;
        }
        for (int x = 0; x <= left; ++x) rec(pos + 1, left - x);
    };
    rec(0, K);
    std::uint64_t cond = 1;
    for (int l = 0; l < J; ++l) cond *= static_cast<std::uint64_t>(N + 1);
    return fp * cond * static_cast<std::uint64_t>(J + 1);
}

}  // namespace

TEST_CASE("state count matches the closed form and brute force") {
    CHECK(StateSpace::count(2, 2, 2, 2) == 270);
    CHECK(StateSpace::count(2, 2, 2, 6) == 1470);
    for (int I = 1; I <= 3; ++I)
        for (int K = 0; K <= 3; ++K)
            for (int N = 1; N <= 3; ++N) CHECK(StateSpace::count(I, 2, K, N) == brute_count(I, 2, K, N));
}

TEST_CASE("index round-trip and lexicographic order") {
    const auto p = params_for(two_by_two(), 3);
    const StateSpace space(p);
    REQUIRE(space.size() == 480);
    std::set<SystemState> seen;
    for (std::size_t k = 0; k < space.size(); ++k) {
        const SystemState x = space.state_of(k);
        CHECK(space.index_of(x) == k);
        CHECK(x.aggregate_level() == 2);
        CHECK(x.j >= 0);
        CHECK(x.j <= 2);
        if (k > 0) CHECK(space.state_of(k - 1) < x);
        seen.insert(x);
    }
    CHECK(seen.size() == space.size());
    CHECK_THROWS_AS(space.state_of(space.size()), std::out_of_range);
}

TEST_CASE("lookups of states outside the space") {
    const StateSpace space(params_for(two_by_two()));
    const SystemState wrong_total{{2, 1}, {0, 0}, {2, 2}, 0};
    CHECK_FALSE(space.find(wrong_total).has_value());
    CHECK_THROWS_AS(space.index_of(wrong_total), std::invalid_argument);
    const SystemState bad_condition{{1, 1}, {0, 0}, {3, 2}, 0};
    CHECK_FALSE(space.find(bad_condition).has_value());
}

TEST_CASE("canonical state") {
    const StateSpace space(params_for(two_by_two()));
    CHECK(space.canonical_state() == SystemState{{1, 1}, {0, 0}, {2, 2}, 0});
    const StateSpace odd(params_for(two_by_two(), 2, 3));
    CHECK(odd.canonical_state() == SystemState{{2, 1}, {0, 0}, {2, 2}, 0});
}

TEST_CASE("size cap") {
    auto p = params_for(two_by_two(), 2, 2);
    p.K = 40;
    CHECK_THROWS_AS(StateSpace(p, 1000), StateSpaceTooLarge);
}
