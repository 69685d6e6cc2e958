#include "doctest.h"

#include <algorithm>

#include "support.hpp"

using namespace cbmspares;
using test_support::params_for;
using test_support::two_by_two;

namespace {

SystemState S(std::vector<int> F, std::vector<int> P, std::vector<int> C, int j) {
    return {std::move(F), std::move(P), std::move(C), j};
}

bool contains(const std::vector<Action>& v, const Action& a) { return std::find(v.begin(), v.end(), a) != v.end(); }

}  // namespace

TEST_CASE("uniform Cox law") {
    const auto d = DegradationModel::uniform(3);
    CHECK(d.mu == std::vector<double>{1, 1, 1, 1});
    CHECK(d.alpha == std::vector<double>{0, 1, 0, 0});
    CHECK(d.max_rate() == 1.0);
    DegradationModel bad = d;
    bad.alpha[2] = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("cost settings") {
    const auto c1 = CostParams::setting(1);
    CHECK(c1.c_e == 10);
    CHECK(c1.c_cs == 1);
    CHECK(c1.c_ps == doctest::Approx(0.2));
    CHECK(c1.c_cp == doctest::Approx(0.05));
    const auto c2 = CostParams::setting(2);
    CHECK(c2.c_e == 100);
    CHECK(c2.c_cs == 10);
    CHECK(c2.c_cp == doctest::Approx(0.1));
    const auto c3 = CostParams::setting(3);
    CHECK(c3.c_e == 10);
    CHECK(c3.c_cs == 0);
    CHECK(c3.c_cl == 1);
    CHECK(c3.c_cp == 0);
    CHECK_THROWS(CostParams::setting(4));
}

TEST_CASE("policy class names round-trip, case-insensitively") {
    for (PolicyClass cls : kAllPolicyClasses) CHECK(parse_policy_class(to_string(cls)) == cls);
    CHECK(parse_policy_class("ocpr") == PolicyClass::OCPR);
    CHECK_THROWS_AS(parse_policy_class("best"), std::invalid_argument);
}

TEST_CASE("epoch classification") {
    CHECK(classify_epoch(S({1, 1}, {0, 0}, {2, 2}, 0), 2) == Epoch::Replenishment);
    CHECK(classify_epoch(S({1, 1}, {0, 0}, {0, 2}, 1), 2) == Epoch::Failure);
    CHECK(classify_epoch(S({1, 1}, {0, 0}, {1, 2}, 1), 2) == Epoch::Degradation);
    CHECK(classify_epoch(S({1, 1}, {0, 0}, {2, 2}, 2), 2) == Epoch::RepairCompletion);
}

TEST_CASE("type-1 and type-2 action lists") {
    const auto x = S({1, 1}, {0, 0}, {0, 2}, 1);
    const auto t1 = type1_actions(x, 2);
    // central, local 1, local 2, and each local with a relocation from the other
    CHECK(t1 == std::vector<Action>{{0, -1, -1}, {1, -1, -1}, {1, 2, 1}, {2, -1, -1}, {2, 1, 2}});

    const auto t2 = type2_actions(S({2, 0}, {0, 0}, {1, 2}, 1));
    CHECK(t2 == std::vector<Action>{{-1, -1, -1}, {-1, 1, 2}});

    CHECK(type1_actions(S({0, 0}, {1, 1}, {0, 2}, 1), 2) == std::vector<Action>{{0, -1, -1}});
    CHECK_THROWS(type1_actions(S({1, 1}, {0, 0}, {2, 2}, 0), 2));
    CHECK_THROWS(type1_actions(S({1, 1}, {0, 0}, {2, 2}, 1), 2));
}

TEST_CASE("closest-first dispatch") {
    const auto inst = two_by_two();
    CHECK(closest_first_action(S({1, 1}, {0, 0}, {0, 2}, 1), inst) == Action{1, -1, -1});
    CHECK(closest_first_action(S({1, 1}, {0, 0}, {2, 0}, 2), inst) == Action{2, -1, -1});
    CHECK(closest_first_action(S({0, 1}, {1, 0}, {0, 2}, 1), inst) == Action{2, -1, -1});
    CHECK(closest_first_action(S({0, 0}, {1, 1}, {0, 2}, 1), inst) == Action{0, -1, -1});

    NetworkInstance tie = inst;
    tie.R = {{5.0, 5.0}, {5.0, 5.0}};
    CHECK(closest_first_action(S({1, 1}, {0, 0}, {0, 2}, 1), tie) == Action{1, -1, -1});
}

TEST_CASE("admissible sets per class") {
    const auto p = params_for(two_by_two());
    const auto fail = S({1, 1}, {0, 0}, {0, 2}, 1);
    const auto degr = S({1, 1}, {0, 0}, {1, 2}, 1);
    const auto repl = S({1, 1}, {0, 0}, {2, 2}, 0);

    CHECK(admissible_actions(fail, PolicyClass::CF, p) == std::vector<Action>{{1, -1, -1}});
    CHECK(admissible_actions(fail, PolicyClass::OC, p) == std::vector<Action>{{0, -1, -1}, {1, -1, -1}, {2, -1, -1}});
    CHECK(admissible_actions(fail, PolicyClass::OCR, p).size() == 5);
    CHECK(admissible_actions(fail, PolicyClass::OCP, p).size() == 3);
    CHECK(admissible_actions(fail, PolicyClass::OCPR, p).size() == 5);

    CHECK(admissible_actions(degr, PolicyClass::CF, p) == std::vector<Action>{kDoNothing});
    CHECK(admissible_actions(degr, PolicyClass::OC, p) == std::vector<Action>{kDoNothing});
    // relocations only
    CHECK(admissible_actions(degr, PolicyClass::OCR, p) == std::vector<Action>{{-1, -1, -1}, {-1, 1, 2}, {-1, 2, 1}});
    // preventive dispatches or wait
    CHECK(admissible_actions(degr, PolicyClass::OCP, p) ==
          std::vector<Action>{{-1, -1, -1}, {0, -1, -1}, {1, -1, -1}, {2, -1, -1}});
    const auto full = admissible_actions(degr, PolicyClass::OCPR, p);
    CHECK(full.size() == 8);
    CHECK(std::is_sorted(full.begin(), full.end()));

    for (PolicyClass cls : kAllPolicyClasses) CHECK(admissible_actions(repl, cls, p) == std::vector<Action>{kDoNothing});
}

TEST_CASE("nesting of class action sets holds in every state") {
    const auto p = params_for(two_by_two(), 3);
    const auto check_subset = [](const std::vector<Action>& a, const std::vector<Action>& b) {
        for (const Action& x : a) CHECK(contains(b, x));
    };
    for (int f1 = 0; f1 <= 2; ++f1)
        for (int c1 = 0; c1 <= 3; ++c1)
            for (int c2 = 0; c2 <= 3; ++c2)
                for (int j = 0; j <= 2; ++j) {
                    const auto x = S({f1, 2 - f1}, {0, 0}, {c1, c2}, j);
                    const auto oc = admissible_actions(x, PolicyClass::OC, p);
                    const auto ocpr = admissible_actions(x, PolicyClass::OCPR, p);
                    check_subset(admissible_actions(x, PolicyClass::CF, p), oc);
                    check_subset(oc, admissible_actions(x, PolicyClass::OCR, p));
                    check_subset(oc, admissible_actions(x, PolicyClass::OCP, p));
                    check_subset(admissible_actions(x, PolicyClass::OCR, p), ocpr);
                    check_subset(admissible_actions(x, PolicyClass::OCP, p), ocpr);
                }
}

TEST_CASE("post-action states") {
    const int N = 2;
    const auto fail = S({1, 1}, {0, 0}, {0, 2}, 1);
    CHECK(post_action_state(fail, {1, -1, -1}, N) == S({0, 1}, {1, 0}, {0, 2}, 1));
    // part comes from warehouse 2 into 1's shelf, 1 reorders
    CHECK(post_action_state(fail, {1, 2, 1}, N) == S({1, 0}, {1, 0}, {0, 2}, 1));
    CHECK(post_action_state(fail, {0, -1, -1}, N) == fail);

    const auto degr = S({2, 0}, {0, 0}, {1, 2}, 1);
    CHECK(post_action_state(degr, {1, -1, -1}, N) == S({1, 0}, {1, 0}, {2, 2}, 1));
    CHECK(post_action_state(degr, {0, -1, -1}, N) == S({2, 0}, {0, 0}, {2, 2}, 1));
    CHECK(post_action_state(degr, {-1, 1, 2}, N) == S({1, 1}, {0, 0}, {1, 2}, 1));
    CHECK(post_action_state(degr, kDoNothing, N) == degr);

    CHECK_THROWS_AS(post_action_state(S({0, 2}, {0, 0}, {0, 2}, 1), {1, -1, -1}, N), std::logic_error);
}

TEST_CASE("immediate costs") {
    const auto p = params_for(two_by_two());  // setting 1, t* = 10
    const auto fail1 = S({1, 1}, {0, 0}, {0, 2}, 1);
    CHECK(immediate_cost(fail1, {0, -1, -1}, p) == 10.0);
    CHECK(immediate_cost(fail1, {1, -1, -1}, p) == doctest::Approx(1.0));
    // R = 16 > t*: c_cs + c_cl + c_cp (16 - 10)
    CHECK(immediate_cost(fail1, {2, -1, -1}, p) == doctest::Approx(1.0 + 1.0 + 0.05 * 6.0));
    CHECK(immediate_cost(fail1, {1, 2, 1}, p) == doctest::Approx(1.0 + 0.2));

    const auto degr = S({1, 1}, {0, 0}, {1, 2}, 1);
    CHECK(immediate_cost(degr, {2, -1, -1}, p) == doctest::Approx(0.2));  // no late penalty on prevention
    CHECK(immediate_cost(degr, {1, 2, 1}, p) == doctest::Approx(0.4));
    CHECK(immediate_cost(degr, {0, -1, -1}, p) == 10.0);
    CHECK(immediate_cost(degr, {-1, 1, 2}, p) == doctest::Approx(0.2));
    CHECK(immediate_cost(degr, kDoNothing, p) == 0.0);
}

TEST_CASE("parameter validation") {
    auto p = params_for(two_by_two());
    p.lambda = 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = params_for(two_by_two());
    p.gamma = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = params_for(two_by_two());
    p.instance.R[0].pop_back();
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
