// Thin bindings: structured data crosses the boundary as JSON or CSV text,
// the same formats the command-line tool writes.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cbmspares/experiments.hpp"
#include "cbmspares/instance_gen.hpp"
#include "cbmspares/serialization.hpp"
#include "cbmspares/simulator.hpp"
#include "cbmspares/solver.hpp"
#include "cbmspares/validation.hpp"

namespace py = pybind11;
using namespace cbmspares;
using nlohmann::json;

namespace {

std::string generate(std::uint64_t seed, int I, int J, double t_star, double square_side) {
    GeneratorConfig gc;
    gc.seed = seed;
    gc.I = I;
    gc.J = J;
    gc.t_star = t_star;
    gc.square_side = square_side;
    return instance_to_json(generate_instance(gc)).dump();
}

std::string params(const std::string& instance, double rho, int n_phases, int cost_setting, int K, double lambda) {
    const NetworkInstance inst = instance_from_json(json::parse(instance));
    ExperimentConfig cfg;
    cfg.I = inst.I;
    cfg.J = inst.J;
    cfg.K = K;
    cfg.lambda = lambda;
    return params_to_json(make_params(cfg, inst, CostParams::setting(cost_setting), rho, n_phases)).dump();
}

std::string solve_json(const std::string& params_text, const std::string& policy) {
    const PolicyClass cls = parse_policy_class(policy);
    const ModelParams p = params_from_json(json::parse(params_text));
    py::gil_scoped_release release;
    const StateSpace space(p);
    const PolicySolution sol = solve(p, space, cls);
    const std::optional<double> delta =
        cls == PolicyClass::CF ? 0.0 : relative_improvement_pct(solve(p, space, PolicyClass::CF).upsilon, sol.upsilon);
    return solution_to_json(sol, p, space, delta).dump();
}

std::string simulate(const std::string& solution, std::uint64_t replications, std::uint64_t seed,
                     std::uint64_t horizon, unsigned jobs, std::optional<std::size_t> start) {
    const LoadedSolution loaded = solution_from_json(json::parse(solution));
    py::gil_scoped_release release;
    const StateSpace space(loaded.params);
    const FiniteMdp mdp = build_mdp(loaded.params, space, loaded.cls);
    const Policy policy = policy_from_actions(mdp, loaded.policy);
    SimConfig cfg;
    cfg.replications = replications;
    cfg.seed = seed;
    cfg.horizon_steps = horizon;
    cfg.jobs = jobs;
    cfg.start_state = start ? *start : space.index_of(space.canonical_state());
    const SimEstimate est = simulate_discounted_cost(mdp, policy, cfg);
    const double v = loaded.V.at(cfg.start_state);
    return json{{"policy_class", std::string(to_string(loaded.cls))},
                {"start_state", cfg.start_state},
                {"replications", est.replications},
                {"horizon_steps", est.horizon_steps},
                {"seed", seed},
                {"mean", est.mean},
                {"halfwidth_95", est.halfwidth},
                {"solver_value", v},
                {"solver_value_inside", std::abs(v - est.mean) <= est.halfwidth}}
        .dump();
}

std::string validate(const std::string& params_text) {
    const ModelParams p = params_from_json(json::parse(params_text));
    py::gil_scoped_release release;
    return validate_model(p).to_json().dump();
}

std::pair<std::string, std::string> table(int which, std::uint64_t seed, int instances, unsigned jobs,
                                          std::optional<std::vector<int>> cost_settings,
                                          std::optional<std::vector<double>> rho,
                                          std::optional<std::vector<int>> n_phases) {
    if (which != 1 && which != 2) throw std::invalid_argument("table must be 1 or 2");
    ExperimentConfig cfg = which == 1 ? table1_config() : table2_config();
    cfg.base_seed = seed;
    cfg.n_instances = instances;
    cfg.jobs = jobs;
    if (cost_settings) cfg.cost_settings = *cost_settings;
    if (rho) cfg.rho_list = *rho;
    if (n_phases) cfg.N_list = *n_phases;
    py::gil_scoped_release release;
    const ExperimentResult r = run_experiment(cfg);
    std::ostringstream rows, cells;
    write_results_csv(rows, r.rows);
    write_summary_csv(cells, r.cells);
    return {rows.str(), cells.str()};
}

std::string sweep(std::uint64_t seed, double rho, int n_phases, int cost_setting, int grid, double max_cost,
                  unsigned jobs) {
    SweepConfig cfg;
    cfg.seed = seed;
    cfg.rho = rho;
    cfg.N = n_phases;
    cfg.cost_setting = cost_setting;
    cfg.grid = grid;
    cfg.max_cost = max_cost;
    cfg.base.jobs = jobs;
    py::gil_scoped_release release;
    std::ostringstream csv;
    write_sweep_csv(csv, run_cost_sweep(cfg));
    return csv.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact MDP solver for a spare-parts network with condition-based maintenance";
    m.def("generate", &generate, py::arg("seed"), py::arg("I") = 2, py::arg("J") = 2, py::arg("t_star") = 10.0,
          py::arg("square_side") = 33.0);
    m.def("params", &params, py::arg("instance"), py::arg("rho") = 1.0, py::arg("n_phases") = 2,
          py::arg("cost_setting") = 1, py::arg("K") = 2, py::arg("lam") = 0.95);
    m.def("solve", &solve_json, py::arg("params"), py::arg("policy") = "ocpr");
    m.def("simulate", &simulate, py::arg("solution"), py::arg("replications") = 10000, py::arg("seed") = 1,
          py::arg("horizon") = 0, py::arg("jobs") = 1, py::arg("start") = py::none());
    m.def("validate", &validate, py::arg("params"));
    m.def("table", &table, py::arg("which"), py::arg("seed") = 1, py::arg("instances") = 30, py::arg("jobs") = 1,
          py::arg("cost_settings") = py::none(), py::arg("rho") = py::none(), py::arg("n_phases") = py::none());
    m.def("sweep", &sweep, py::arg("seed") = 1, py::arg("rho") = 0.5, py::arg("n_phases") = 2,
          py::arg("cost_setting") = 1, py::arg("grid") = 16, py::arg("max_cost") = 1.5, py::arg("jobs") = 1);
}
