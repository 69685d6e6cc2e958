// Command-line front end: instance generation, single solves, simulation
// checks, the table batches, the setup-cost sweep and the invariant suite.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cbmspares/experiments.hpp"
#include "cbmspares/instance_gen.hpp"
#include "cbmspares/serialization.hpp"
#include "cbmspares/simulator.hpp"
#include "cbmspares/solver.hpp"
#include "cbmspares/validation.hpp"

using namespace cbmspares;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int report_error(const std::string& kind, const std::string& message, int code) {
    json err = {{"error", {{"type", kind}, {"message", message}}}};
    std::cerr << err.dump() << '\n';
    return code;
}

/// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(path + ": write failed");
}

// Options shared by the commands that build a single model.
struct ModelOptions {
    std::string instance_path;
    std::uint64_t seed = 1;
    double rho = 1.0;
    int n_phases = 2;
    int cost_setting = 1;
    int K = 2;
    double lambda = 0.95;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--instance", instance_path, "Instance JSON (default: generate from --seed)");
        cmd.add_option("--seed", seed, "Instance seed when no --instance is given");
        cmd.add_option("--rho", rho, "Load rho = J / (N gamma K)")->check(CLI::PositiveNumber);
        cmd.add_option("--n-phases", n_phases, "Degradation phases N")->check(CLI::Range(1, 64));
        cmd.add_option("--cost-setting", cost_setting, "Cost setting 1, 2 or 3")->check(CLI::Range(1, 3));
        cmd.add_option("--K", K, "Total spare parts")->check(CLI::Range(1, 1000));
        cmd.add_option("--lambda", lambda, "Discount factor")->check(CLI::Range(0.0, 0.999999));
    }

    ModelParams build() const {
        NetworkInstance inst;
        if (!instance_path.empty()) {
            try {
                inst = instance_from_json(read_json_file(instance_path));
            } catch (const FormatError& e) {
                const std::string msg = e.what();
                throw FormatError(msg.rfind(instance_path, 0) == 0 ? msg : instance_path + ": " + msg);
            }
        } else {
            GeneratorConfig gc;
            gc.seed = seed;
            inst = generate_instance(gc);
        }
        ExperimentConfig cfg;
        cfg.I = inst.I;
        cfg.J = inst.J;
        cfg.K = K;
        cfg.lambda = lambda;
        return make_params(cfg, inst, CostParams::setting(cost_setting), rho, n_phases);
    }
};

struct BatchOptions {
    std::uint64_t seed = 1;
    std::vector<int> cost_settings;
    std::vector<double> rho;
    std::vector<int> n_phases;
    int instances = 30;
    unsigned jobs = 1;
    std::string out;
    std::string summary;
    bool timing = false;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--seed", seed, "Base seed; instance k uses seed + k");
        cmd.add_option("--cost-setting", cost_settings, "Cost settings to run")->check(CLI::Range(1, 3));
        cmd.add_option("--rho", rho, "Loads to run")->check(CLI::PositiveNumber);
        cmd.add_option("--n-phases", n_phases, "Phase counts to run")->check(CLI::Range(1, 64));
        cmd.add_option("--instances", instances, "Instances per cell")->check(CLI::Range(1, 100000));
        cmd.add_option("--jobs", jobs, "Parallel instance solves")->check(CLI::Range(1u, 1024u));
        cmd.add_option("--out", out, "Per-instance results CSV (default stdout)");
        cmd.add_option("--summary", summary, "Cell summary CSV");
        cmd.add_flag("--timing", timing, "Record wall time per solve (output no longer byte-stable)");
    }

    void apply(ExperimentConfig& cfg) const {
        cfg.base_seed = seed;
        if (!cost_settings.empty()) cfg.cost_settings = cost_settings;
        if (!rho.empty()) cfg.rho_list = rho;
        if (!n_phases.empty()) cfg.N_list = n_phases;
        cfg.n_instances = instances;
        cfg.jobs = jobs;
        cfg.record_wall_time = timing;
    }

    void write(const ExperimentResult& r) const {
        std::ostringstream rows, cells;
        write_results_csv(rows, r.rows);
        emit(out, rows.str());
        write_summary_csv(cells, r.cells);
        if (!summary.empty()) emit(summary, cells.str());
        else if (!out.empty() && out != "-") std::cout << cells.str();
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spare-parts network with condition-based maintenance: exact MDP solver and experiment harness"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a random instance");
    GeneratorConfig gen_cfg;
    std::string gen_out;
    gen->add_option("--seed", gen_cfg.seed, "Instance seed");
    gen->add_option("--warehouses", gen_cfg.I, "Local warehouses I")->check(CLI::Range(1, 64));
    gen->add_option("--machines", gen_cfg.J, "Machines J")->check(CLI::Range(1, 64));
    gen->add_option("--t-star", gen_cfg.t_star, "Response-time threshold")->check(CLI::PositiveNumber);
    gen->add_option("--out", gen_out, "Output JSON (default stdout)");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve one policy class on one instance");
    ModelOptions solve_model;
    std::string policy_name = "ocpr";
    std::string solve_out;
    solve_model.add_to(*solve_cmd);
    solve_cmd->add_option("--policy", policy_name, "cf, oc, ocr, ocp or ocpr");
    solve_cmd->add_option("--out", solve_out, "Solution JSON (default stdout)");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of a solved policy's discounted cost");
    std::string sim_solution;
    SimConfig sim_cfg;
    std::optional<std::size_t> sim_start;
    std::string sim_trace, sim_out;
    sim_cmd->add_option("--solution", sim_solution, "Solution JSON written by solve")->required();
    sim_cmd->add_option("--replications", sim_cfg.replications, "Replications")->check(CLI::Range(1ull, 100000000ull));
    sim_cmd->add_option("--horizon", sim_cfg.horizon_steps, "Steps per replication (default: truncation rule)");
    sim_cmd->add_option("--seed", sim_cfg.seed, "Simulation seed");
    sim_cmd->add_option("--start", sim_start, "Start state index (default: canonical state)");
    sim_cmd->add_option("--jobs", sim_cfg.jobs, "Threads")->check(CLI::Range(1u, 1024u));
    sim_cmd->add_option("--trace", sim_trace, "CSV trace of the first replication");
    sim_cmd->add_option("--out", sim_out, "Result JSON (default stdout)");

    // table1 / table2
    auto* t1 = app.add_subcommand("table1", "Policy comparison per cost setting and load");
    BatchOptions t1_opts;
    t1_opts.add_to(*t1);
    auto* t2 = app.add_subcommand("table2", "Policy comparison per number of phases");
    BatchOptions t2_opts;
    t2_opts.add_to(*t2);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Preventive / relocation setup-cost sweep");
    SweepConfig sweep_cfg;
    std::string sweep_out;
    sweep_cmd->add_option("--seed", sweep_cfg.seed, "Instance seed");
    sweep_cmd->add_option("--rho", sweep_cfg.rho, "Load")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--n-phases", sweep_cfg.N, "Degradation phases")->check(CLI::Range(1, 64));
    sweep_cmd->add_option("--cost-setting", sweep_cfg.cost_setting, "Base cost setting")->check(CLI::Range(1, 3));
    sweep_cmd->add_option("--grid", sweep_cfg.grid, "Points per axis")->check(CLI::Range(2, 1000));
    sweep_cmd->add_option("--max-cost", sweep_cfg.max_cost, "Upper end of both axes")->check(CLI::NonNegativeNumber);
    sweep_cmd->add_option("--jobs", sweep_cfg.base.jobs, "Parallel solves")->check(CLI::Range(1u, 1024u));
    sweep_cmd->add_option("--out", sweep_out, "Sweep CSV (default stdout)");

    // validate
    auto* val_cmd = app.add_subcommand("validate", "Run the structural invariant suite on an instance");
    ModelOptions val_model;
    std::string val_out;
    val_model.add_to(*val_cmd);
    val_cmd->add_option("--out", val_out, "Report JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage", e.what(), 2);
    }

    try {
        if (*gen) {
            emit(gen_out, instance_to_json(generate_instance(gen_cfg)).dump(2) + "\n");
        } else if (*solve_cmd) {
            PolicyClass cls;
            try {
                cls = parse_policy_class(policy_name);
            } catch (const std::invalid_argument& e) {
                throw UsageError(std::string("--policy: ") + e.what());
            }
            const ModelParams params = solve_model.build();
            const StateSpace space(params);
            const PolicySolution sol = solve(params, space, cls);
            std::optional<double> delta;
            if (cls == PolicyClass::CF) delta = 0.0;
            else delta = relative_improvement_pct(solve(params, space, PolicyClass::CF).upsilon, sol.upsilon);
            emit(solve_out, solution_to_json(sol, params, space, delta).dump(2) + "\n");
        } else if (*sim_cmd) {
            const LoadedSolution loaded = solution_from_json(read_json_file(sim_solution));
            const StateSpace space(loaded.params);
            const FiniteMdp mdp = build_mdp(loaded.params, space, loaded.cls);
            const Policy policy = policy_from_actions(mdp, loaded.policy);
            sim_cfg.start_state = sim_start ? *sim_start : space.index_of(space.canonical_state());
            const SimEstimate est = simulate_discounted_cost(mdp, policy, sim_cfg);
            if (!sim_trace.empty()) {
                std::ostringstream trace;
                write_trace(trace, mdp, policy, sim_cfg);
                emit(sim_trace, trace.str());
            }
            const double v = loaded.V.at(sim_cfg.start_state);
            json out = {{"policy_class", std::string(to_string(loaded.cls))},
                        {"start_state", sim_cfg.start_state},
                        {"replications", est.replications},
                        {"horizon_steps", est.horizon_steps},
                        {"seed", sim_cfg.seed},
                        {"mean", est.mean},
                        {"halfwidth_95", est.halfwidth},
                        {"solver_value", v},
                        {"solver_value_inside", std::abs(v - est.mean) <= est.halfwidth}};
            emit(sim_out, out.dump(2) + "\n");
        } else if (*t1) {
            ExperimentConfig cfg = table1_config();
            t1_opts.apply(cfg);
            t1_opts.write(run_table1(cfg));
        } else if (*t2) {
            ExperimentConfig cfg = table2_config();
            t2_opts.apply(cfg);
            t2_opts.write(run_table2(cfg));
        } else if (*sweep_cmd) {
            std::ostringstream csv;
            write_sweep_csv(csv, run_cost_sweep(sweep_cfg));
            emit(sweep_out, csv.str());
        } else if (*val_cmd) {
            const ValidationReport report = validate_model(val_model.build());
            emit(val_out, report.to_json().dump(2) + "\n");
            if (!report.passed()) return report_error("validation", "invariant suite failed", 1);
        }
    } catch (const UsageError& e) {
        return report_error("usage", e.what(), 2);
    } catch (const FormatError& e) {
        return report_error("format", e.what(), 2);
    } catch (const std::invalid_argument& e) {
        return report_error("invalid_argument", e.what(), 2);
    } catch (const std::exception& e) {
        return report_error("runtime", e.what(), 1);
    }
    return 0;
}
