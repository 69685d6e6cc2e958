#include "cbmspares/simulator.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "cbmspares/format.hpp"
#include "cbmspares/parallel.hpp"
#include "cbmspares/random.hpp"

namespace cbmspares {

namespace {

std::size_t sample_successor(const Choice& choice, double u) {
    double acc = 0.0;
    for (const Successor& s : choice.successors) {
        acc += s.probability;
        if (u < acc) return s.target;
    }
    // u landed in the rounding gap at the top of the row
    for (auto it = choice.successors.rbegin(); it != choice.successors.rend(); ++it)
        if (it->probability > 0.0) return it->target;
    throw std::logic_error("simulator: empty transition row");
}

/// Walks one replication and reports every step to visit(step, state, choice, weight).
template <class Visit>
double run_replication(const FiniteMdp& mdp, std::span<const std::size_t> policy, const SimConfig& cfg,
                       std::uint64_t horizon, std::uint64_t replication, Visit&& visit) {
    std::mt19937_64 gen(stream_seed(cfg.seed, replication));
    const double discount = mdp.discount();
    std::size_t s = cfg.start_state;
    double weight = 1.0;
    double total = 0.0;
    for (std::uint64_t t = 0; t < horizon; ++t) {
        const Choice& c = mdp.choices(s)[policy[s]];
        visit(t, s, c, weight);
        total += weight * c.cost;
        weight *= discount;
        s = sample_successor(c, uniform01(gen));
    }
    return total;
}

void check_policy(const FiniteMdp& mdp, std::span<const std::size_t> policy) {
    if (policy.size() != mdp.size()) throw std::invalid_argument("simulator: policy size does not match the model");
    for (std::size_t s = 0; s < policy.size(); ++s)
        if (policy[s] >= mdp.choices(s).size())
            throw std::invalid_argument("simulator: policy choice out of range in state " + std::to_string(s));
}

std::uint64_t horizon_of(const FiniteMdp& mdp, const SimConfig& cfg) {
    return cfg.horizon_steps > 0 ? cfg.horizon_steps : default_horizon(mdp);
}

}  // namespace

void SimConfig::validate(const FiniteMdp& mdp) const {
    if (replications < 1) throw std::invalid_argument("simulator: replications must be >= 1");
    if (start_state >= mdp.size()) throw std::invalid_argument("simulator: start state out of range");
}

std::uint64_t default_horizon(const FiniteMdp& mdp, double budget) {
    const double lambda = mdp.discount();
    double c_max = 0.0;
    for (std::size_t s = 0; s < mdp.size(); ++s)
        for (const Choice& c : mdp.choices(s)) c_max = std::max(c_max, std::abs(c.cost));
    if (c_max == 0.0 || lambda == 0.0) return 1;
    // lambda^t c_max / (1 - lambda) < budget
    const double t = std::log(budget * (1.0 - lambda) / c_max) / std::log(lambda);
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(t)) + 1);
}

SimEstimate simulate_discounted_cost(const FiniteMdp& mdp, std::span<const std::size_t> policy,
                                     const SimConfig& cfg) {
    cfg.validate(mdp);
    check_policy(mdp, policy);
    const std::uint64_t horizon = horizon_of(mdp, cfg);

    std::vector<double> totals(cfg.replications);
    parallel_for(totals.size(), cfg.jobs, [&](std::size_t r) {
        totals[r] = run_replication(mdp, policy, cfg, horizon, r, [](auto&&...) {});
    });

    SimEstimate est;
    est.replications = cfg.replications;
    est.horizon_steps = horizon;
    const double n = static_cast<double>(totals.size());
    double sum = 0.0;
    for (double x : totals) sum += x;
    est.mean = sum / n;
    if (totals.size() > 1) {
        double ss = 0.0;
        for (double x : totals) ss += (x - est.mean) * (x - est.mean);
        est.std_dev = std::sqrt(ss / (n - 1.0));
        est.halfwidth = 1.959963984540054 * est.std_dev / std::sqrt(n);
    }
    return est;
}

std::vector<TrajectoryCounts> trajectory_stats(const FiniteMdp& mdp, std::span<const std::size_t> policy,
                                               const StateSpace& space, const SimConfig& cfg) {
    cfg.validate(mdp);
    check_policy(mdp, policy);
    if (space.size() != mdp.size()) throw std::invalid_argument("simulator: state space does not match the model");
    const std::uint64_t horizon = horizon_of(mdp, cfg);

    std::vector<TrajectoryCounts> counts(cfg.replications);
    parallel_for(counts.size(), cfg.jobs, [&](std::size_t r) {
        TrajectoryCounts& out = counts[r];
        run_replication(mdp, policy, cfg, horizon, r, [&](std::uint64_t, std::size_t s, const Choice& c, double) {
            const SystemState x = space.state_of(s);
            const bool machine_epoch = x.j > 0;
            const bool failed = machine_epoch && x.condition(x.j) == 0;
            if (failed) ++out.failures;
            if (c.label.x == kCentral) ++out.central;
            if (c.label.x >= 0 && machine_epoch && !failed) ++out.preventive;
            if (c.label.y >= 1) ++out.relocations;
        });
    });
    return counts;
}

void write_trace(std::ostream& out, const FiniteMdp& mdp, std::span<const std::size_t> policy,
                 const SimConfig& cfg) {
    cfg.validate(mdp);
    check_policy(mdp, policy);
    out << "step,state,x,y,z,cost,discounted_cost\n";
    run_replication(mdp, policy, cfg, horizon_of(mdp, cfg), 0,
                    [&](std::uint64_t t, std::size_t s, const Choice& c, double weight) {
                        out << t << ',' << s << ',' << c.label.x << ',' << c.label.y << ',' << c.label.z << ','
                            << format_double(c.cost) << ',' << format_double(weight * c.cost) << '\n';
                    });
}

}  // namespace cbmspares
