#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "cbmspares/model.hpp"
#include "cbmspares/solver.hpp"
#include "cbmspares/state_space.hpp"

namespace cbmspares {

/// Batch configuration shared by the table runs and the cost sweep.
struct ExperimentConfig {
    std::uint64_t base_seed = 1;  // instance k of every cell uses base_seed + k
    int n_instances = 30;
    int I = 2;
    int J = 2;
    int K = 2;
    std::vector<int> cost_settings{1, 2, 3};
    std::optional<CostParams> costs;  // overrides cost_settings when set; reported as setting 0
    std::vector<double> rho_list{1.0, 0.7, 0.5, 0.3};
    std::vector<int> N_list{2};
    std::vector<PolicyClass> policy_classes{std::begin(kAllPolicyClasses), std::end(kAllPolicyClasses)};
    double lambda = 0.95;
    double t_star = 10.0;
    double square_side = 33.0;
    double mu = 1.0;  // every phase rate, including the repair rate mu_0
    unsigned jobs = 1;
    bool record_wall_time = false;

    void validate() const;
};

/// Grid of the cost-setting / load table: settings 1-3, rho in {1, 0.7, 0.5, 0.3}, N = 2.
ExperimentConfig table1_config();
/// Setting 1, rho in {1, 0.5}, N in 2..6.
ExperimentConfig table2_config();

std::uint64_t instance_seed(const ExperimentConfig& cfg, int k);

/// Model for one cell: generated instance, uniform Cox law with N phases and
/// gamma back-solved from rho.
ModelParams make_params(const ExperimentConfig& cfg, const NetworkInstance& instance, const CostParams& costs,
                        double rho, int N);

struct ResultRow {
    int cost_setting = 0;
    double rho = 0.0;
    int N = 0;
    std::uint64_t instance_seed = 0;
    PolicyClass policy = PolicyClass::CF;
    std::optional<double> upsilon;  // empty when the solve failed
    std::optional<double> delta_pct;
    std::size_t iterations = 0;
    std::optional<double> wall_time_s;
    std::string error;
};

/// Everything solved for one (setting, rho, N, instance) task.
struct InstanceResult {
    int cost_setting = 0;
    double rho = 0.0;
    int N = 0;
    std::uint64_t instance_seed = 0;
    std::optional<ModelParams> params;
    std::vector<PolicySolution> solutions;  // cfg.policy_classes order; empty on failure
    std::vector<ResultRow> rows;
    std::string error;
};

/// Called once per task from the worker that solved it (possibly concurrently).
using InstanceInspector = std::function<void(const InstanceResult&)>;

struct CellSummary {
    int cost_setting = 0;
    double rho = 0.0;
    int N = 0;
    PolicyClass policy = PolicyClass::CF;
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
    std::optional<double> mean_upsilon;
    /// Per-instance delta averaged over instances.
    std::optional<double> mean_delta_pct;
    /// Delta of the averaged upsilon values.
    std::optional<double> pooled_delta_pct;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;  // cell order, then instance, then class
    std::vector<CellSummary> cells;
};

/// Solves every configured class on one instance. Solver failures are caught
/// and recorded in the rows; instance generation failures likewise.
InstanceResult solve_instance(const ExperimentConfig& cfg, int cost_setting, double rho, int N, int k);

/// Runs every (setting, rho, N, instance) task on cfg.jobs threads and merges
/// in task order, so the output is independent of scheduling.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const InstanceInspector& inspect = {});

ExperimentResult run_table1(const ExperimentConfig& cfg, const InstanceInspector& inspect = {});
ExperimentResult run_table2(const ExperimentConfig& cfg, const InstanceInspector& inspect = {});

std::vector<CellSummary> summarize(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows);

inline constexpr const char* kResultsHeader =
    "cost_setting,rho,N,instance_seed,policy,upsilon,delta_pct,iterations,wall_time_s";
inline constexpr const char* kSummaryHeader =
    "cost_setting,rho,N,policy,n_ok,n_failed,mean_upsilon,mean_delta_pct,pooled_delta_pct";
inline constexpr const char* kSweepHeader = "c_ps,c_rs,prev_fraction,reloc_fraction,upsilon";

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& cells);

// ---------------------------------------------------------------------------
// Setup-cost sweep
// ---------------------------------------------------------------------------

struct ActionFractions {
    std::optional<double> prevention;  // empty when no state allows prevention
    std::optional<double> relocation;
};

/// Share of degradation epochs where the policy dispatches a part, and share
/// of relocation-capable states where it relocates.
ActionFractions action_fractions(const PolicySolution& solution, const FiniteMdp& mdp, const StateSpace& space);

struct SweepConfig {
    ExperimentConfig base;    // geometry, K, lambda, mu, jobs
    std::uint64_t seed = 1;   // instance seed
    int cost_setting = 1;     // costs other than c_ps and c_rs
    double rho = 0.5;
    int N = 2;
    int grid = 16;            // points per axis
    double max_cost = 1.5;    // grid covers [0, max_cost]^2

    void validate() const;
};

struct SweepPoint {
    double c_ps = 0.0;
    double c_rs = 0.0;
    ActionFractions fractions;
    double upsilon = 0.0;
};

/// Optimal full-flexibility policy at each grid point, c_ps major, c_rs minor.
std::vector<SweepPoint> run_cost_sweep(const SweepConfig& cfg);

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

}  // namespace cbmspares
