#include "cbmspares/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "cbmspares/format.hpp"
#include "cbmspares/instance_gen.hpp"
#include "cbmspares/parallel.hpp"

namespace cbmspares {

void ExperimentConfig::validate() const {
    if (n_instances < 1) throw std::invalid_argument("experiment: n_instances must be >= 1");
    if (I < 1 || J < 1) throw std::invalid_argument("experiment: I and J must be >= 1");
    if (K < 1) throw std::invalid_argument("experiment: K must be >= 1 (the load formula divides by K)");
    if (!costs) {
        if (cost_settings.empty()) throw std::invalid_argument("experiment: no cost setting given");
        for (int s : cost_settings)
            if (s < 1 || s > 3) throw std::invalid_argument("experiment: cost setting must be 1, 2 or 3");
    } else {
        costs->validate();
    }
    if (rho_list.empty()) throw std::invalid_argument("experiment: empty rho list");
    for (double r : rho_list)
        if (!(r > 0.0)) throw std::invalid_argument("experiment: rho must be > 0");
    if (N_list.empty()) throw std::invalid_argument("experiment: empty N list");
    for (int n : N_list)
        if (n < 1) throw std::invalid_argument("experiment: N must be >= 1");
    if (policy_classes.empty()) throw std::invalid_argument("experiment: no policy class given");
    if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("experiment: lambda must be in [0, 1)");
    if (!(mu > 0.0)) throw std::invalid_argument("experiment: mu must be > 0");
}

ExperimentConfig table1_config() { return ExperimentConfig{}; }

ExperimentConfig table2_config() {
    ExperimentConfig cfg;
    cfg.cost_settings = {1};
    cfg.rho_list = {1.0, 0.5};
    cfg.N_list = {2, 3, 4, 5, 6};
    return cfg;
}

std::uint64_t instance_seed(const ExperimentConfig& cfg, int k) {
    return cfg.base_seed + static_cast<std::uint64_t>(k);
}

ModelParams make_params(const ExperimentConfig& cfg, const NetworkInstance& instance, const CostParams& costs,
                        double rho, int N) {
    ModelParams p;
    p.instance = instance;
    p.degradation = DegradationModel::uniform(N, cfg.mu);
    p.K = cfg.K;
    p.gamma = gamma_from_load(rho, cfg.J, N, cfg.K);
    p.lambda = cfg.lambda;
    p.costs = costs;
    p.validate();
    return p;
}

namespace {

CostParams costs_for(const ExperimentConfig& cfg, int setting) {
    return cfg.costs ? *cfg.costs : CostParams::setting(setting);
}

std::vector<int> settings_of(const ExperimentConfig& cfg) {
    return cfg.costs ? std::vector<int>{0} : cfg.cost_settings;
}

std::optional<double> mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return std::nullopt;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

}  // namespace

InstanceResult solve_instance(const ExperimentConfig& cfg, int cost_setting, double rho, int N, int k) {
    InstanceResult out;
    out.cost_setting = cost_setting;
    out.rho = rho;
    out.N = N;
    out.instance_seed = instance_seed(cfg, k);

    auto make_row = [&](PolicyClass cls) {
        ResultRow r;
        r.cost_setting = cost_setting;
        r.rho = rho;
        r.N = N;
        r.instance_seed = out.instance_seed;
        r.policy = cls;
        return r;
    };

    try {
        GeneratorConfig gc;
        gc.seed = out.instance_seed;
        gc.I = cfg.I;
        gc.J = cfg.J;
        gc.square_side = cfg.square_side;
        gc.t_star = cfg.t_star;
        out.params = make_params(cfg, generate_instance(gc), costs_for(cfg, cost_setting), rho, N);
    } catch (const std::exception& e) {
        out.error = e.what();
        for (PolicyClass cls : cfg.policy_classes) {
            out.rows.push_back(make_row(cls));
            out.rows.back().error = out.error;
        }
        return out;
    }

    const StateSpace space(*out.params);
    std::optional<double> cf_upsilon;
    for (PolicyClass cls : cfg.policy_classes) {
        ResultRow row = make_row(cls);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            PolicySolution sol = solve(*out.params, space, cls);
            if (!sol.converged) throw std::runtime_error("policy iteration hit its iteration cap");
            row.upsilon = sol.upsilon;
            row.iterations = sol.iterations;
            if (cls == PolicyClass::CF) cf_upsilon = sol.upsilon;
            out.solutions.push_back(std::move(sol));
        } catch (const std::exception& e) {
            row.error = e.what();
            if (out.error.empty()) out.error = e.what();
        }
        if (cfg.record_wall_time)
            row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.rows.push_back(std::move(row));
    }
    if (!out.error.empty()) out.solutions.clear();

    for (ResultRow& row : out.rows)
        if (row.upsilon && cf_upsilon) row.delta_pct = relative_improvement_pct(*cf_upsilon, *row.upsilon);
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const InstanceInspector& inspect) {
    cfg.validate();
    struct Task {
        int setting;
        double rho;
        int N;
        int k;
    };
    std::vector<Task> tasks;
    for (int s : settings_of(cfg))
        for (double rho : cfg.rho_list)
            for (int N : cfg.N_list)
                for (int k = 0; k < cfg.n_instances; ++k) tasks.push_back({s, rho, N, k});

    std::vector<std::vector<ResultRow>> rows(tasks.size());
    parallel_for(tasks.size(), cfg.jobs, [&](std::size_t t) {
        InstanceResult r = solve_instance(cfg, tasks[t].setting, tasks[t].rho, tasks[t].N, tasks[t].k);
        if (inspect) inspect(r);
        rows[t] = std::move(r.rows);
    });

    ExperimentResult out;
    for (auto& block : rows)
        for (auto& r : block) out.rows.push_back(std::move(r));
    out.cells = summarize(cfg, out.rows);
    return out;
}

ExperimentResult run_table1(const ExperimentConfig& cfg, const InstanceInspector& inspect) {
    return run_experiment(cfg, inspect);
}

ExperimentResult run_table2(const ExperimentConfig& cfg, const InstanceInspector& inspect) {
    return run_experiment(cfg, inspect);
}

std::vector<CellSummary> summarize(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows) {
    std::vector<CellSummary> cells;
    for (int s : settings_of(cfg))
        for (double rho : cfg.rho_list)
            for (int N : cfg.N_list)
                for (PolicyClass cls : cfg.policy_classes) {
                    CellSummary c;
                    c.cost_setting = s;
                    c.rho = rho;
                    c.N = N;
                    c.policy = cls;
                    std::vector<double> ups, deltas, paired_cf, paired_x;
                    // CF value per instance of this cell, for the pooled figure
                    std::vector<std::pair<std::uint64_t, double>> cf;
                    for (const ResultRow& r : rows)
                        if (r.cost_setting == s && r.rho == rho && r.N == N && r.policy == PolicyClass::CF &&
                            r.upsilon)
                            cf.emplace_back(r.instance_seed, *r.upsilon);
                    for (const ResultRow& r : rows) {
                        if (r.cost_setting != s || r.rho != rho || r.N != N || r.policy != cls) continue;
                        if (!r.upsilon) {
                            ++c.n_failed;
                            continue;
                        }
                        ++c.n_ok;
                        ups.push_back(*r.upsilon);
                        if (r.delta_pct) deltas.push_back(*r.delta_pct);
                        for (const auto& [seed, v] : cf)
                            if (seed == r.instance_seed) {
                                paired_cf.push_back(v);
                                paired_x.push_back(*r.upsilon);
                            }
                    }
                    c.mean_upsilon = mean_of(ups);
                    c.mean_delta_pct = mean_of(deltas);
                    const auto mcf = mean_of(paired_cf);
                    const auto mx = mean_of(paired_x);
                    if (mcf && mx) c.pooled_delta_pct = relative_improvement_pct(*mcf, *mx);
                    cells.push_back(c);
                }
    return cells;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << kResultsHeader << '\n';
    for (const ResultRow& r : rows)
        out << r.cost_setting << ',' << format_double(r.rho) << ',' << r.N << ',' << r.instance_seed << ','
            << to_string(r.policy) << ',' << format_optional(r.upsilon) << ',' << format_optional(r.delta_pct)
            << ',' << r.iterations << ',' << format_optional(r.wall_time_s) << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& cells) {
    out << kSummaryHeader << '\n';
    for (const CellSummary& c : cells)
        out << c.cost_setting << ',' << format_double(c.rho) << ',' << c.N << ',' << to_string(c.policy) << ','
            << c.n_ok << ',' << c.n_failed << ',' << format_optional(c.mean_upsilon) << ','
            << format_optional(c.mean_delta_pct) << ',' << format_optional(c.pooled_delta_pct) << '\n';
}

// ---------------------------------------------------------------------------

ActionFractions action_fractions(const PolicySolution& solution, const FiniteMdp& mdp, const StateSpace& space) {
    if (solution.policy.size() != space.size() || mdp.size() != space.size())
        throw std::invalid_argument("action_fractions: solution does not match the state space");
    std::size_t prev_num = 0, prev_den = 0, reloc_num = 0, reloc_den = 0;
    for (std::size_t s = 0; s < space.size(); ++s) {
        const Action& a = solution.policy[s];
        if (classify_epoch(space.state_of(s), space.N()) == Epoch::Degradation) {
            ++prev_den;  // central dispatch keeps type-1 actions nonempty here
            if (a.x >= 0) ++prev_num;
        }
        const auto& choices = mdp.choices(s);
        if (std::any_of(choices.begin(), choices.end(), [](const Choice& c) { return c.label.y >= 1; })) {
            ++reloc_den;
            if (a.y >= 1) ++reloc_num;
        }
    }
    ActionFractions f;
    if (prev_den > 0) f.prevention = static_cast<double>(prev_num) / static_cast<double>(prev_den);
    if (reloc_den > 0) f.relocation = static_cast<double>(reloc_num) / static_cast<double>(reloc_den);
    return f;
}

void SweepConfig::validate() const {
    base.validate();
    if (grid < 2) throw std::invalid_argument("sweep: grid must have at least 2 points per axis");
    if (!(max_cost >= 0.0)) throw std::invalid_argument("sweep: max_cost must be >= 0");
    if (!(rho > 0.0)) throw std::invalid_argument("sweep: rho must be > 0");
    if (N < 1) throw std::invalid_argument("sweep: N must be >= 1");
    if (cost_setting < 1 || cost_setting > 3) throw std::invalid_argument("sweep: cost setting must be 1, 2 or 3");
}

std::vector<SweepPoint> run_cost_sweep(const SweepConfig& cfg) {
    cfg.validate();
    GeneratorConfig gc;
    gc.seed = cfg.seed;
    gc.I = cfg.base.I;
    gc.J = cfg.base.J;
    gc.square_side = cfg.base.square_side;
    gc.t_star = cfg.base.t_star;
    const NetworkInstance instance = generate_instance(gc);
    const CostParams base_costs = cfg.base.costs ? *cfg.base.costs : CostParams::setting(cfg.cost_setting);

    const auto n = static_cast<std::size_t>(cfg.grid);
    std::vector<SweepPoint> points(n * n);
    parallel_for(points.size(), cfg.base.jobs, [&](std::size_t t) {
        // i * max / (grid - 1) hits both endpoints exactly
        auto coord = [&](std::size_t i) { return cfg.max_cost * static_cast<double>(i) / static_cast<double>(cfg.grid - 1); };
        SweepPoint& pt = points[t];
        pt.c_ps = coord(t / n);
        pt.c_rs = coord(t % n);
        CostParams costs = base_costs;
        costs.c_ps = pt.c_ps;
        costs.c_rs = pt.c_rs;
        const ModelParams params = make_params(cfg.base, instance, costs, cfg.rho, cfg.N);
        const StateSpace space(params);
        const FiniteMdp mdp = build_mdp(params, space, PolicyClass::OCPR);
        const PolicySolution sol = solve(mdp, params, space, PolicyClass::OCPR);
        pt.fractions = action_fractions(sol, mdp, space);
        pt.upsilon = sol.upsilon;
    });
    return points;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << kSweepHeader << '\n';
    for (const SweepPoint& p : points)
        out << format_double(p.c_ps) << ',' << format_double(p.c_rs) << ','
            << format_optional(p.fractions.prevention) << ',' << format_optional(p.fractions.relocation) << ','
            << format_double(p.upsilon) << '\n';
}

}  // namespace cbmspares
