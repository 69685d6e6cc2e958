#include "cbmspares/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbmspares/transitions.hpp"

namespace cbmspares {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

const Choice& chosen(const FiniteMdp& mdp, std::span<const std::size_t> policy, std::size_t s) {
    return mdp.choices(s)[policy[s]];
}

void check_policy(const FiniteMdp& mdp, std::span<const std::size_t> policy) {
    if (policy.size() != mdp.size()) throw std::invalid_argument("policy size does not match the MDP");
    for (std::size_t s = 0; s < policy.size(); ++s)
        if (policy[s] >= mdp.choices(s).size())
            throw std::invalid_argument("policy picks a nonexistent choice in state " + std::to_string(s));
}

double evaluation_residual(const FiniteMdp& mdp, std::span<const std::size_t> policy, std::span<const double> v) {
    double r = 0.0;
    for (std::size_t s = 0; s < mdp.size(); ++s)
        r = std::max(r, std::abs(v[s] - choice_value(mdp, chosen(mdp, policy, s), v)));
    return r;
}

std::vector<double> stationary_residual_vector(const FiniteMdp& mdp, std::span<const std::size_t> policy,
                                               std::span<const double> pi) {
    std::vector<double> next(mdp.size(), 0.0);
    for (std::size_t s = 0; s < mdp.size(); ++s)
        for (const auto& succ : chosen(mdp, policy, s).successors) next[succ.target] += pi[s] * succ.probability;
    return next;
}

// Number of closed communicating classes of the chain induced by `policy`
// (Tarjan SCC on the successor graph; a class is closed when no edge leaves it).
std::size_t closed_class_count(const FiniteMdp& mdp, std::span<const std::size_t> policy) {
    const std::size_t n = mdp.size();
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnset), low(n, 0), component(n, kUnset);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t next_index = 0, components = 0;

    struct Frame {
        std::size_t state;
        std::size_t edge;
    };
    std::vector<Frame> frames;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnset) continue;
        frames.push_back({root, 0});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& succ = chosen(mdp, policy, f.state).successors;
            if (f.edge < succ.size()) {
                const std::size_t t = succ[f.edge++].target;
                if (index[t] == kUnset) {
                    index[t] = low[t] = next_index++;
                    stack.push_back(t);
                    on_stack[t] = true;
                    frames.push_back({t, 0});
                } else if (on_stack[t]) {
                    low[f.state] = std::min(low[f.state], index[t]);
                }
                continue;
            }
            const std::size_t v = f.state;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().state] = std::min(low[frames.back().state], low[v]);
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    component[w] = components;
                } while (w != v);
                ++components;
            }
        }
    }

    std::vector<bool> closed(components, true);
    for (std::size_t s = 0; s < n; ++s)
        for (const auto& succ : chosen(mdp, policy, s).successors)
            if (component[succ.target] != component[s]) closed[component[s]] = false;
    return static_cast<std::size_t>(std::count(closed.begin(), closed.end(), true));
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

}  // namespace

FiniteMdp::FiniteMdp(std::size_t n_states, double discount) : choices_(n_states), discount_(discount) {
    if (!(discount >= 0.0 && discount < 1.0)) throw std::invalid_argument("discount must lie in [0,1)");
}

void FiniteMdp::add_choice(std::size_t state, Choice choice) { choices_.at(state).push_back(std::move(choice)); }

void FiniteMdp::check() const {
    for (std::size_t s = 0; s < size(); ++s) {
        if (choices_[s].empty()) throw std::invalid_argument("state " + std::to_string(s) + " has no choices");
        for (const auto& c : choices_[s]) {
            double total = 0.0;
            for (const auto& succ : c.successors) {
                if (succ.target >= size())
                    throw std::invalid_argument("state " + std::to_string(s) + " has a successor out of range");
                if (!(succ.probability >= 0.0 && succ.probability <= 1.0))
                    throw std::invalid_argument("state " + std::to_string(s) + " has a probability outside [0,1]");
                total += succ.probability;
            }
            if (std::abs(total - 1.0) > 1e-12)
                throw std::invalid_argument("row of state " + std::to_string(s) + " sums to " + std::to_string(total));
            if (!std::isfinite(c.cost)) throw std::invalid_argument("state " + std::to_string(s) + " has a non-finite cost");
        }
    }
}

double choice_value(const FiniteMdp& mdp, const Choice& choice, std::span<const double> values) {
    double expected = 0.0;
    for (const auto& succ : choice.successors) expected += succ.probability * values[succ.target];
    return choice.cost + mdp.discount() * expected;
}

double bellman_residual(const FiniteMdp& mdp, std::span<const double> values) {
    double r = 0.0;
    for (std::size_t s = 0; s < mdp.size(); ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : mdp.choices(s)) best = std::min(best, choice_value(mdp, c, values));
        r = std::max(r, std::abs(values[s] - best));
    }
    return r;
}

Evaluation policy_evaluation(const FiniteMdp& mdp, std::span<const std::size_t> policy,
                             const EvaluationOptions& options) {
    check_policy(mdp, policy);
    const std::size_t n = mdp.size();
    Evaluation out;

    if (n <= options.direct_limit) {
        std::vector<Triplet> triplets;
        Eigen::VectorXd cost(static_cast<Eigen::Index>(n));
        for (std::size_t s = 0; s < n; ++s) {
            const Choice& c = chosen(mdp, policy, s);
            const auto row = static_cast<int>(s);
            cost[row] = c.cost;
            triplets.emplace_back(row, row, 1.0);
            for (const auto& succ : c.successors)
                triplets.emplace_back(row, static_cast<int>(succ.target), -mdp.discount() * succ.probability);
        }
        SparseMatrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        a.setFromTriplets(triplets.begin(), triplets.end());
        a.makeCompressed();

        Eigen::SparseLU<SparseMatrix> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success) throw std::runtime_error("policy evaluation: LU factorization failed");
        const Eigen::VectorXd v = lu.solve(cost);
        out.values.assign(v.data(), v.data() + v.size());
        out.direct = true;
        out.residual = evaluation_residual(mdp, policy, out.values);
        return out;
    }

    out.direct = false;
    out.values.assign(n, 0.0);
    std::vector<double> next(n);
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        for (std::size_t s = 0; s < n; ++s) next[s] = choice_value(mdp, chosen(mdp, policy, s), out.values);
        const double delta = sup_distance(next, out.values);
        out.values.swap(next);
        if (delta < options.tolerance) {
            out.residual = evaluation_residual(mdp, policy, out.values);
            return out;
        }
    }
    throw std::runtime_error("policy evaluation: no convergence after " + std::to_string(options.max_iterations) +
                             " iterations, residual " +
                             std::to_string(evaluation_residual(mdp, policy, out.values)));
}

Policy greedy_policy(const FiniteMdp& mdp, std::span<const double> values, double tie_tolerance) {
    Policy policy(mdp.size(), 0);
    std::vector<double> q;
    for (std::size_t s = 0; s < mdp.size(); ++s) {
        const auto& choices = mdp.choices(s);
        q.resize(choices.size());
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < choices.size(); ++k) {
            q[k] = choice_value(mdp, choices[k], values);
            best = std::min(best, q[k]);
        }
        const double slack = tie_tolerance * std::max(1.0, std::abs(best));
        for (std::size_t k = 0; k < choices.size(); ++k)
            if (q[k] <= best + slack) {
                policy[s] = k;
                break;
            }
    }
    return policy;
}

PolicyIterationResult policy_iteration(const FiniteMdp& mdp, Policy initial, const PolicyIterationOptions& options) {
    check_policy(mdp, initial);
    PolicyIterationResult out;
    out.policy = std::move(initial);

    while (out.iterations < options.max_iterations) {
        ++out.iterations;
        out.values = policy_evaluation(mdp, out.policy, options.evaluation).values;
        Policy improved = greedy_policy(mdp, out.values, options.tie_tolerance);
        if (improved == out.policy) {
            out.converged = true;
            break;
        }
        out.policy = std::move(improved);
    }
    if (!out.converged) out.values = policy_evaluation(mdp, out.policy, options.evaluation).values;
    out.bellman_residual = bellman_residual(mdp, out.values);
    return out;
}

ValueIterationResult value_iteration(const FiniteMdp& mdp, double eps, std::size_t max_iterations) {
    const double lambda = mdp.discount();
    const double threshold = lambda > 0.0 ? eps * (1.0 - lambda) / (2.0 * lambda) : std::numeric_limits<double>::infinity();

    ValueIterationResult out;
    out.values.assign(mdp.size(), 0.0);
    std::vector<double> next(mdp.size());
    while (out.iterations < max_iterations) {
        ++out.iterations;
        double delta = 0.0;
        for (std::size_t s = 0; s < mdp.size(); ++s) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : mdp.choices(s)) best = std::min(best, choice_value(mdp, c, out.values));
            next[s] = best;
            delta = std::max(delta, std::abs(best - out.values[s]));
            if (best < out.values[s] - 1e-12 * std::max(1.0, std::abs(best))) out.monotone = false;
        }
        out.values.swap(next);
        if (delta < threshold) {
            out.converged = true;
            break;
        }
    }
    out.policy = greedy_policy(mdp, out.values);
    return out;
}

std::string_view to_string(StationaryMethod m) {
    return m == StationaryMethod::Direct ? "direct" : "power_iteration";
}

StationaryResult stationary_distribution(const FiniteMdp& mdp, std::span<const std::size_t> policy,
                                         std::size_t start_state, double tolerance) {
    check_policy(mdp, policy);
    const std::size_t n = mdp.size();
    if (start_state >= n) throw std::invalid_argument("stationary distribution: start state out of range");

    StationaryResult out;
    auto finish = [&](std::vector<double> pi) -> bool {
        double mass = 0.0;
        for (double& p : pi) {
            if (p < -tolerance) return false;
            p = std::max(p, 0.0);
            mass += p;
        }
        if (!(mass > 0.0)) return false;
        for (double& p : pi) p /= mass;
        const double residual = sup_distance(stationary_residual_vector(mdp, policy, pi), pi);
        if (!(residual < tolerance)) return false;
        out.pi = std::move(pi);
        out.residual = residual;
        return true;
    };

    // Balance equations (P^T - I) pi = 0, the last one replaced by sum(pi) = 1.
    // Only well posed when the chain has a single closed class.
    out.closed_classes = closed_class_count(mdp, policy);
    if (out.closed_classes == 1) {
        const auto last = static_cast<int>(n - 1);
        std::vector<Triplet> triplets;
        for (std::size_t s = 0; s < n; ++s) {
            const auto col = static_cast<int>(s);
            if (col != last) triplets.emplace_back(col, col, -1.0);
            for (const auto& succ : chosen(mdp, policy, s).successors)
                if (static_cast<int>(succ.target) != last)
                    triplets.emplace_back(static_cast<int>(succ.target), col, succ.probability);
            triplets.emplace_back(last, col, 1.0);
        }
        SparseMatrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        a.setFromTriplets(triplets.begin(), triplets.end());
        a.makeCompressed();

        Eigen::SparseLU<SparseMatrix> lu;
        lu.compute(a);
        if (lu.info() == Eigen::Success) {
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
            rhs[last] = 1.0;
            const Eigen::VectorXd x = lu.solve(rhs);
            if (lu.info() == Eigen::Success && x.allFinite() && finish(std::vector<double>(x.data(), x.data() + n))) {
                out.method = StationaryMethod::Direct;
                return out;
            }
        }
    }

    out.method = StationaryMethod::PowerIteration;
    std::vector<double> pi(n, 0.0);
    pi[start_state] = 1.0;
    constexpr std::size_t kMaxPowerIterations = 2'000'000;
    for (std::size_t it = 1; it <= kMaxPowerIterations; ++it) {
        std::vector<double> next = stationary_residual_vector(mdp, policy, pi);
        for (std::size_t k = 0; k < n; ++k) next[k] = 0.5 * (next[k] + pi[k]);
        pi.swap(next);
        if (it % 64 == 0 && finish(pi)) {
            out.iterations = it;
            return out;
        }
    }
    throw std::runtime_error("stationary distribution: power iteration did not converge");
}

double weighted_value(std::span<const double> pi, std::span<const double> values) {
    if (pi.size() != values.size()) throw std::invalid_argument("weighted_value: size mismatch");
    double u = 0.0;
    for (std::size_t k = 0; k < pi.size(); ++k) u += pi[k] * values[k];
    return u;
}

std::optional<double> relative_improvement_pct(double baseline, double value) {
    if (baseline == 0.0) return std::nullopt;
    return (baseline - value) / baseline * 100.0;
}

// ---------------------------------------------------------------------------

FiniteMdp build_mdp(const ModelParams& params, const StateSpace& space, PolicyClass cls) {
    FiniteMdp mdp(space.size(), params.lambda);
    for (std::size_t s = 0; s < space.size(); ++s) {
        const SystemState state = space.state_of(s);
        for (const Action& a : admissible_actions(state, cls, params)) {
            Choice c{.label = a, .cost = immediate_cost(state, a, params), .successors = {}};
            const TransitionRow row = transition_row(space, s, a, params);
            c.successors.reserve(row.entries.size());
            for (const auto& e : row.entries) c.successors.push_back({static_cast<std::uint32_t>(e.target), e.probability});
            mdp.add_choice(s, std::move(c));
        }
    }
    return mdp;
}

Policy policy_from_actions(const FiniteMdp& mdp, std::span<const Action> actions) {
    if (actions.size() != mdp.size()) throw std::invalid_argument("policy size does not match the state space");
    Policy policy(actions.size());
    for (std::size_t s = 0; s < actions.size(); ++s) {
        const auto& choices = mdp.choices(s);
        const auto it = std::find_if(choices.begin(), choices.end(),
                                     [&](const Choice& c) { return c.label == actions[s]; });
        if (it == choices.end())
            throw std::invalid_argument("action " + to_string(actions[s]) + " is not admissible in state " +
                                        std::to_string(s));
        policy[s] = static_cast<std::size_t>(it - choices.begin());
    }
    return policy;
}

Policy closest_first_policy(const FiniteMdp& mdp, const ModelParams& params, const StateSpace& space) {
    std::vector<Action> actions(space.size());
    for (std::size_t s = 0; s < space.size(); ++s)
        actions[s] = admissible_actions(space.state_of(s), PolicyClass::CF, params).front();
    return policy_from_actions(mdp, actions);
}

PolicySolution solve(const FiniteMdp& mdp, const ModelParams& params, const StateSpace& space, PolicyClass cls,
                     const SolveOptions& options) {
    PolicySolution sol;
    sol.cls = cls;

    auto pi_result = policy_iteration(mdp, closest_first_policy(mdp, params, space), options.policy_iteration);
    sol.choice = std::move(pi_result.policy);
    sol.V = std::move(pi_result.values);
    sol.iterations = pi_result.iterations;
    sol.converged = pi_result.converged;
    sol.bellman_residual = pi_result.bellman_residual;

    sol.policy.resize(space.size());
    for (std::size_t s = 0; s < space.size(); ++s) sol.policy[s] = mdp.choices(s)[sol.choice[s]].label;

    auto stationary = stationary_distribution(mdp, sol.choice, space.index_of(space.canonical_state()),
                                              options.stationary_tolerance);
    sol.pi = std::move(stationary.pi);
    sol.stationary_method = stationary.method;
    sol.stationary_residual = stationary.residual;
    sol.upsilon = weighted_value(sol.pi, sol.V);
    return sol;
}

PolicySolution solve(const ModelParams& params, const StateSpace& space, PolicyClass cls, const SolveOptions& options) {
    return solve(build_mdp(params, space, cls), params, space, cls, options);
}

}  // namespace cbmspares
