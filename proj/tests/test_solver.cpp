#include "doctest.h"

#include <cmath>

#include <Eigen/Dense>

#include "cbmspares/solver.hpp"
#include "cbmspares/transitions.hpp"
#include "support.hpp"

using namespace cbmspares;
using test_support::generated;
using test_support::params_for;
using test_support::two_by_two;

namespace {

Choice choice(Action label, double cost, std::vector<Successor> succ) { return {label, cost, std::move(succ)}; }

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

/// Dense (I - lambda P) V = c solved independently of the solver's sparse path.
std::vector<double> dense_evaluation(const FiniteMdp& mdp, const Policy& policy) {
    const auto n = static_cast<Eigen::Index>(mdp.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd c(n);
    for (Eigen::Index s = 0; s < n; ++s) {
        const Choice& ch = mdp.choices(static_cast<std::size_t>(s))[policy[static_cast<std::size_t>(s)]];
        c(s) = ch.cost;
        for (const Successor& t : ch.successors) A(s, t.target) -= mdp.discount() * t.probability;
    }
    const Eigen::VectorXd v = A.partialPivLu().solve(c);
    return {v.data(), v.data() + n};
}

}  // namespace

TEST_CASE("single self-loop: V = c / (1 - lambda)") {
    FiniteMdp mdp(1, 0.95);
    mdp.add_choice(0, choice(kDoNothing, 1.0, {{0, 1.0}}));
    mdp.check();
    const auto ev = policy_evaluation(mdp, Policy{0});
    CHECK(ev.values[0] == doctest::Approx(20.0).epsilon(1e-12));
    const auto pi = policy_iteration(mdp, Policy{0});
    CHECK(pi.converged);
    CHECK(pi.values[0] == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("two-action choice picks the cheaper loop") {
    // state 0: stay for 2 per step, or pay 5 once to move to the free absorbing state 1
    FiniteMdp mdp(2, 0.9);
    mdp.add_choice(0, choice({-1, -1, -1}, 2.0, {{0, 1.0}}));
    mdp.add_choice(0, choice({0, -1, -1}, 5.0, {{1, 1.0}}));
    mdp.add_choice(1, choice(kDoNothing, 0.0, {{1, 1.0}}));
    const auto r = policy_iteration(mdp, Policy{0, 0});
    CHECK(r.policy == Policy{1, 0});
    CHECK(r.values[0] == doctest::Approx(5.0));
    CHECK(r.values[1] == doctest::Approx(0.0));
    CHECK(r.bellman_residual < 1e-12);
    const auto vi = value_iteration(mdp, 1e-9);
    CHECK(vi.converged);
    CHECK(vi.monotone);
    CHECK(vi.policy == Policy{1, 0});
    CHECK(vi.values[0] == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("exact ties go to the first choice") {
    FiniteMdp mdp(1, 0.5);
    mdp.add_choice(0, choice({-1, -1, -1}, 1.0, {{0, 1.0}}));
    mdp.add_choice(0, choice({0, -1, -1}, 1.0, {{0, 1.0}}));
    CHECK(policy_iteration(mdp, Policy{1}).policy == Policy{0});
}

TEST_CASE("check() rejects malformed rows") {
    FiniteMdp mdp(2, 0.9);
    mdp.add_choice(0, choice(kDoNothing, 0.0, {{1, 0.5}}));
    mdp.add_choice(1, choice(kDoNothing, 0.0, {{1, 1.0}}));
    CHECK_THROWS_AS(mdp.check(), std::invalid_argument);
    FiniteMdp empty(1, 0.9);
    CHECK_THROWS_AS(empty.check(), std::invalid_argument);
}

TEST_CASE("iterative evaluation agrees with the direct solve") {
    const auto p = generated(3);
    const StateSpace space(p);
    const FiniteMdp mdp = build_mdp(p, space, PolicyClass::OCR);
    const Policy cf = closest_first_policy(mdp, p, space);
    EvaluationOptions iterative;
    iterative.direct_limit = 0;
    iterative.tolerance = 1e-12;
    const auto a = policy_evaluation(mdp, cf);
    const auto b = policy_evaluation(mdp, cf, iterative);
    CHECK(a.direct);
    CHECK_FALSE(b.direct);
    CHECK(sup_diff(a.values, b.values) < 1e-9);
    CHECK(sup_diff(a.values, dense_evaluation(mdp, cf)) < 1e-10);
}

TEST_CASE("policy iteration and value iteration agree on generated instances") {
    for (std::uint64_t seed : {11u, 12u}) {
        const auto p = generated(seed, 2, 2, 0.5, static_cast<int>(seed % 3) + 1);
        const StateSpace space(p);
        for (PolicyClass cls : kAllPolicyClasses) {
            const FiniteMdp mdp = build_mdp(p, space, cls);
            const auto sol = solve(mdp, p, space, cls);
            const auto vi = value_iteration(mdp, 1e-8);
            CHECK(vi.converged);
            CHECK(sup_diff(sol.V, vi.values) < 1e-6);
            CHECK(sol.bellman_residual < 1e-8);
        }
    }
}

TEST_CASE("stationary distribution of a two-state chain") {
    // 0 -> 1 w.p. a, 1 -> 0 w.p. b: pi = (b, a) / (a + b)
    const double a = 0.3, b = 0.1;
    FiniteMdp mdp(2, 0.9);
    mdp.add_choice(0, choice(kDoNothing, 0.0, {{0, 1 - a}, {1, a}}));
    mdp.add_choice(1, choice(kDoNothing, 0.0, {{0, b}, {1, 1 - b}}));
    const auto st = stationary_distribution(mdp, Policy{0, 0}, 0);
    CHECK(st.method == StationaryMethod::Direct);
    CHECK(st.closed_classes == 1);
    CHECK(st.pi[0] == doctest::Approx(b / (a + b)));
    CHECK(st.pi[1] == doctest::Approx(a / (a + b)));
}

TEST_CASE("several closed classes fall back to the class of the start state") {
    // 0 and 1 absorbing, 2 splits evenly; 3 <-> 4 a periodic closed pair
    FiniteMdp mdp(5, 0.9);
    mdp.add_choice(0, choice(kDoNothing, 0.0, {{0, 1.0}}));
    mdp.add_choice(1, choice(kDoNothing, 0.0, {{1, 1.0}}));
    mdp.add_choice(2, choice(kDoNothing, 0.0, {{0, 0.5}, {1, 0.5}}));
    mdp.add_choice(3, choice(kDoNothing, 0.0, {{4, 1.0}}));
    mdp.add_choice(4, choice(kDoNothing, 0.0, {{3, 1.0}}));
    const auto from1 = stationary_distribution(mdp, Policy(5, 0), 1);
    CHECK(from1.method == StationaryMethod::PowerIteration);
    CHECK(from1.closed_classes == 3);
    CHECK(from1.pi[1] == doctest::Approx(1.0));
    const auto from2 = stationary_distribution(mdp, Policy(5, 0), 2);
    CHECK(from2.pi[0] == doctest::Approx(0.5));
    CHECK(from2.pi[1] == doctest::Approx(0.5));
    // lazy chain removes the periodicity
    const auto from3 = stationary_distribution(mdp, Policy(5, 0), 3);
    CHECK(from3.pi[3] == doctest::Approx(0.5));
    CHECK(from3.pi[4] == doctest::Approx(0.5));
}

TEST_CASE("stationary identity: pi . V = pi . c / (1 - lambda)") {
    const auto p = generated(5, 2, 2, 0.7, 1);
    const StateSpace space(p);
    for (PolicyClass cls : kAllPolicyClasses) {
        const FiniteMdp mdp = build_mdp(p, space, cls);
        const auto sol = solve(mdp, p, space, cls);
        double pc = 0.0;
        for (std::size_t s = 0; s < space.size(); ++s) pc += sol.pi[s] * mdp.choices(s)[sol.choice[s]].cost;
        CHECK(sol.upsilon == doctest::Approx(pc / (1.0 - p.lambda)).epsilon(1e-9));
        CHECK(sol.stationary_residual < 1e-10);
    }
}

TEST_CASE("closest-first discounted failures do not depend on geometry") {
    // Under CF no action touches machine conditions, so the discounted number
    // of failure epochs from the canonical state depends on the law and tau only.
    auto failures = [](std::uint64_t seed) {
        auto p = generated(seed, 2, 2, 1.0, 1);
        p.costs = CostParams{};
        const StateSpace space(p);
        FiniteMdp mdp = build_mdp(p, space, PolicyClass::CF);
        FiniteMdp counted(space.size(), p.lambda);
        for (std::size_t s = 0; s < space.size(); ++s) {
            Choice c = mdp.choices(s).front();
            c.cost = classify_epoch(space.state_of(s), p.N()) == Epoch::Failure ? 1.0 : 0.0;
            counted.add_choice(s, std::move(c));
        }
        const auto v = policy_evaluation(counted, Policy(space.size(), 0)).values;
        return v[space.index_of(space.canonical_state())];
    };
    CHECK(failures(1) == doctest::Approx(failures(2)).epsilon(1e-12));
    CHECK(failures(1) == doctest::Approx(failures(9)).epsilon(1e-12));
}

TEST_CASE("policy_from_actions rejects inadmissible actions") {
    const auto p = params_for(two_by_two());
    const StateSpace space(p);
    const FiniteMdp mdp = build_mdp(p, space, PolicyClass::OC);
    std::vector<Action> acts(space.size(), kDoNothing);
    CHECK_THROWS_AS(policy_from_actions(mdp, acts), std::invalid_argument);
}

TEST_CASE("relative improvement") {
    CHECK(*relative_improvement_pct(7.19, 6.57) == doctest::Approx(8.623).epsilon(1e-3));
    CHECK(*relative_improvement_pct(3.0, 3.0) == 0.0);
    CHECK_FALSE(relative_improvement_pct(0.0, 1.0).has_value());
    CHECK(weighted_value(std::vector<double>{0.25, 0.75}, std::vector<double>{4.0, 4.0}) == 4.0);
}
