#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cbmspares/solver.hpp"
#include "cbmspares/state_space.hpp"

namespace cbmspares {

struct SimConfig {
    std::uint64_t replications = 10'000;
    /// Uniformized steps per replication; 0 picks default_horizon().
    std::uint64_t horizon_steps = 0;
    std::uint64_t seed = 0;
    std::size_t start_state = 0;
    unsigned jobs = 1;

    void validate(const FiniteMdp& mdp) const;
};

struct SimEstimate {
    double mean = 0.0;
    double halfwidth = 0.0;  // 95% normal approximation
    double std_dev = 0.0;
    std::uint64_t replications = 0;
    std::uint64_t horizon_steps = 0;
};

/// Smallest t with discount^t * c_max / (1 - discount) < budget (at least 1).
std::uint64_t default_horizon(const FiniteMdp& mdp, double budget = 1e-6);

/**
 * Monte Carlo estimate of the discounted cost from cfg.start_state under a
 * fixed policy, simulated on the uniformized chain itself (dummy self-loops
 * included) so the estimate targets exactly the solver's fixed point.
 *
 * Replication r draws from its own stream seeded by (cfg.seed, r); results are
 * reduced in replication order, so output does not depend on cfg.jobs.
 */
SimEstimate simulate_discounted_cost(const FiniteMdp& mdp, std::span<const std::size_t> policy,
                                     const SimConfig& cfg);

struct TrajectoryCounts {
    std::uint64_t failures = 0;
    std::uint64_t preventive = 0;
    std::uint64_t central = 0;
    std::uint64_t relocations = 0;

    friend bool operator==(const TrajectoryCounts&, const TrajectoryCounts&) = default;
};

/// Per-replication event counts over the same trajectories as
/// simulate_discounted_cost with an identical config.
std::vector<TrajectoryCounts> trajectory_stats(const FiniteMdp& mdp, std::span<const std::size_t> policy,
                                               const StateSpace& space, const SimConfig& cfg);

/// CSV trace of replication 0: step,state,x,y,z,cost,discounted_cost.
void write_trace(std::ostream& out, const FiniteMdp& mdp, std::span<const std::size_t> policy,
                 const SimConfig& cfg);

}  // namespace cbmspares
