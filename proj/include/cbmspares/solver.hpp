#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbmspares/model.hpp"
#include "cbmspares/state_space.hpp"

namespace cbmspares {

/// Sparse next-state probability.
struct Successor {
    std::uint32_t target;
    double probability;
};

/// One admissible decision in a state: its label, immediate cost and row.
struct Choice {
    Action label;
    double cost = 0.0;
    std::vector<Successor> successors;
};

/**
 * Finite discounted-cost MDP with explicit per-state choice lists.
 *
 * Choices of a state are expected in ascending label order; greedy ties are
 * broken towards the first one.
 */
class FiniteMdp {
public:
    FiniteMdp(std::size_t n_states, double discount);

    std::size_t size() const { return choices_.size(); }
    double discount() const { return discount_; }

    void add_choice(std::size_t state, Choice choice);
    const std::vector<Choice>& choices(std::size_t state) const { return choices_[state]; }

    /// Throws std::invalid_argument on empty states, bad targets, or rows not summing to 1.
    void check() const;

private:
    std::vector<std::vector<Choice>> choices_;
    double discount_;
};

/// choice index per state
using Policy = std::vector<std::size_t>;

/// Q(s, a) = c(s, a) + discount * sum_s' p(s'|s,a) V(s').
double choice_value(const FiniteMdp& mdp, const Choice& choice, std::span<const double> values);

/// max_s |V(s) - min_a Q(s, a)|
double bellman_residual(const FiniteMdp& mdp, std::span<const double> values);

struct EvaluationOptions {
    /// Above this many states the fixed-point path is used instead of sparse LU.
    std::size_t direct_limit = 10'000;
    double tolerance = 1e-10;
    std::size_t max_iterations = 1'000'000;
};

struct Evaluation {
    std::vector<double> values;
    double residual = 0.0;  // max_s |V - c - discount P V|
    bool direct = true;
};

/// Solves V = c + discount P V for a fixed policy.
/// Throws std::runtime_error if the iterative path does not reach the tolerance.
Evaluation policy_evaluation(const FiniteMdp& mdp, std::span<const std::size_t> policy,
                             const EvaluationOptions& options = {});

struct PolicyIterationOptions {
    std::size_t max_iterations = 1000;
    EvaluationOptions evaluation;
    /// Relative slack under which two Q values count as tied.
    double tie_tolerance = 1e-11;
};

struct PolicyIterationResult {
    Policy policy;
    std::vector<double> values;
    std::size_t iterations = 0;
    bool converged = false;
    double bellman_residual = 0.0;
};

/// Howard policy iteration with lexicographic tie-breaking among greedy choices.
PolicyIterationResult policy_iteration(const FiniteMdp& mdp, Policy initial,
                                       const PolicyIterationOptions& options = {});

struct ValueIterationResult {
    std::vector<double> values;
    Policy policy;  // greedy with respect to `values`
    std::size_t iterations = 0;
    bool converged = false;
    /// Iterates V_k were componentwise nondecreasing throughout.
    bool monotone = true;
};

/// Jacobi value iteration from V = 0; stops once the sup-norm update falls
/// below eps (1 - discount) / (2 discount), which bounds the error by eps.
ValueIterationResult value_iteration(const FiniteMdp& mdp, double eps = 1e-6, std::size_t max_iterations = 100'000);

/// Greedy policy for V with the same tie rule as policy_iteration.
Policy greedy_policy(const FiniteMdp& mdp, std::span<const double> values, double tie_tolerance = 1e-11);

enum class StationaryMethod { Direct, PowerIteration };

struct StationaryResult {
    std::vector<double> pi;
    StationaryMethod method = StationaryMethod::Direct;
    double residual = 0.0;  // ||pi P - pi||_inf
    std::size_t iterations = 0;
    std::size_t closed_classes = 0;
};

std::string_view to_string(StationaryMethod m);

/// Stationary distribution of the chain induced by `policy`.
///
/// Solves pi P = pi with one balance equation replaced by sum(pi) = 1. If the
/// chain has more than one closed class (the system is singular), or the
/// solution fails the residual/sign checks, falls back to power iteration on
/// the lazy chain (I + P) / 2 started from `start_state`, which yields the
/// limiting distribution from that state. Throws std::runtime_error if neither path reaches `tolerance`.
StationaryResult stationary_distribution(const FiniteMdp& mdp, std::span<const std::size_t> policy,
                                         std::size_t start_state, double tolerance = 1e-10);

/// upsilon = pi . V
double weighted_value(std::span<const double> pi, std::span<const double> values);

/// (baseline - value) / baseline * 100; empty when the baseline is zero.
std::optional<double> relative_improvement_pct(double baseline, double value);

// ---------------------------------------------------------------------------
// Spare-parts network
// ---------------------------------------------------------------------------

/// Builds the MDP restricted to a policy class: admissible actions, immediate
/// costs and uniformized rows for every state.
FiniteMdp build_mdp(const ModelParams& params, const StateSpace& space, PolicyClass cls);

struct SolveOptions {
    PolicyIterationOptions policy_iteration;
    double stationary_tolerance = 1e-10;
};

struct PolicySolution {
    PolicyClass cls = PolicyClass::CF;
    std::vector<Action> policy;  // action per state index
    Policy choice;               // index into the class's choice list per state
    std::vector<double> V;
    std::vector<double> pi;
    double upsilon = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double bellman_residual = 0.0;
    StationaryMethod stationary_method = StationaryMethod::Direct;
    double stationary_residual = 0.0;
};

/// Choice indices of the closest-first action (always admissible) in every state.
Policy closest_first_policy(const FiniteMdp& mdp, const ModelParams& params, const StateSpace& space);

/// Optimal policy within a class by policy iteration, starting from closest-first.
PolicySolution solve(const ModelParams& params, const StateSpace& space, PolicyClass cls,
                     const SolveOptions& options = {});

/// Same, reusing an already built MDP for the class.
PolicySolution solve(const FiniteMdp& mdp, const ModelParams& params, const StateSpace& space, PolicyClass cls,
                     const SolveOptions& options = {});

/// Looks up the choice index of each action; throws if one is inadmissible.
Policy policy_from_actions(const FiniteMdp& mdp, std::span<const Action> actions);

}  // namespace cbmspares
