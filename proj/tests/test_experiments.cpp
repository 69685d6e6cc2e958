#include "doctest.h"

#include <sstream>

#include "cbmspares/experiments.hpp"
#include "support.hpp"

using namespace cbmspares;
using test_support::generated;

namespace {

ExperimentConfig small() {
    ExperimentConfig cfg;
    cfg.n_instances = 3;
    cfg.cost_settings = {1};
    cfg.rho_list = {0.5};
    cfg.N_list = {2};
    return cfg;
}

std::string csv(const ExperimentResult& r) {
    std::ostringstream out;
    write_results_csv(out, r.rows);
    write_summary_csv(out, r.cells);
    return out.str();
}

}  // namespace

TEST_CASE("default grids") {
    const auto t1 = table1_config();
    CHECK(t1.cost_settings == std::vector<int>{1, 2, 3});
    CHECK(t1.rho_list == std::vector<double>{1.0, 0.7, 0.5, 0.3});
    CHECK(t1.N_list == std::vector<int>{2});
    CHECK(t1.n_instances == 30);
    const auto t2 = table2_config();
    CHECK(t2.cost_settings == std::vector<int>{1});
    CHECK(t2.rho_list == std::vector<double>{1.0, 0.5});
    CHECK(t2.N_list == std::vector<int>{2, 3, 4, 5, 6});
}

TEST_CASE("rows, deltas and cell summaries") {
    const auto r = run_experiment(small());
    REQUIRE(r.rows.size() == 3 * 5);
    REQUIRE(r.cells.size() == 5);
    for (const auto& row : r.rows) {
        REQUIRE(row.upsilon.has_value());
        CHECK(row.error.empty());
        CHECK_FALSE(row.wall_time_s.has_value());
        if (row.policy == PolicyClass::CF) CHECK(*row.delta_pct == 0.0);
    }
    // instance k uses base_seed + k
    CHECK(r.rows.front().instance_seed == 1);
    CHECK(r.rows.back().instance_seed == 3);

    const auto& cf = r.cells[0];
    CHECK(cf.policy == PolicyClass::CF);
    CHECK(cf.n_ok == 3);
    double mean = 0.0;
    for (const auto& row : r.rows)
        if (row.policy == PolicyClass::CF) mean += *row.upsilon / 3.0;
    CHECK(*cf.mean_upsilon == doctest::Approx(mean));
    const auto& ocpr = r.cells[4];
    CHECK(*ocpr.pooled_delta_pct == doctest::Approx((*cf.mean_upsilon - *ocpr.mean_upsilon) / *cf.mean_upsilon * 100));
}

TEST_CASE("byte-identical output across runs and thread counts") {
    auto cfg = small();
    const auto a = csv(run_experiment(cfg));
    const auto b = csv(run_experiment(cfg));
    cfg.jobs = 3;
    const auto c = csv(run_experiment(cfg));
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a.rfind(std::string(kResultsHeader) + "\n", 0) == 0);
}

TEST_CASE("generation failures are recorded in the rows") {
    auto cfg = small();
    cfg.n_instances = 1;
    cfg.t_star = 1e-6;
    cfg.square_side = 1e6;
    const auto r = run_experiment(cfg);
    REQUIRE(r.rows.size() == 5);
    for (const auto& row : r.rows) {
        CHECK_FALSE(row.upsilon.has_value());
        CHECK_FALSE(row.error.empty());
    }
    CHECK(r.cells[0].n_failed == 1);
    CHECK_FALSE(r.cells[0].mean_upsilon.has_value());
    std::ostringstream out;
    write_results_csv(out, r.rows);
    CHECK(out.str().find("NA,NA") != std::string::npos);
}

TEST_CASE("wall time only on request") {
    auto cfg = small();
    cfg.n_instances = 1;
    cfg.record_wall_time = true;
    for (const auto& row : run_experiment(cfg).rows) CHECK(row.wall_time_s.has_value());
}

TEST_CASE("invalid configs") {
    auto cfg = small();
    cfg.n_instances = 0;
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    cfg = small();
    cfg.cost_settings = {4};
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    cfg = small();
    cfg.rho_list = {-1.0};
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("action fractions") {
    const auto p = generated(1, 2, 2, 0.5, 1);
    const StateSpace space(p);
    for (PolicyClass cls : {PolicyClass::CF, PolicyClass::OC}) {
        const FiniteMdp mdp = build_mdp(p, space, cls);
        const auto f = action_fractions(solve(mdp, p, space, cls), mdp, space);
        CHECK(*f.prevention == 0.0);
        CHECK_FALSE(f.relocation.has_value());  // no relocation is admissible at all
    }

    const FiniteMdp full = build_mdp(p, space, PolicyClass::OCPR);
    const auto f = action_fractions(solve(full, p, space, PolicyClass::OCPR), full, space);
    CHECK(*f.prevention >= 0.0);
    CHECK(*f.prevention <= 1.0);
    CHECK(*f.relocation >= 0.0);
    CHECK(*f.relocation <= 1.0);

    auto pricey = p;
    pricey.costs.c_ps = 1e6;
    pricey.costs.c_e = 1e6;
    const FiniteMdp mdp = build_mdp(pricey, space, PolicyClass::OCPR);
    CHECK(*action_fractions(solve(mdp, pricey, space, PolicyClass::OCPR), mdp, space).prevention == 0.0);
}

TEST_CASE("sweep grid layout") {
    SweepConfig cfg;
    cfg.grid = 3;
    const auto pts = run_cost_sweep(cfg);
    REQUIRE(pts.size() == 9);
    CHECK(pts[0].c_ps == 0.0);
    CHECK(pts[0].c_rs == 0.0);
    CHECK(pts[1].c_rs == 0.75);
    CHECK(pts[8].c_ps == 1.5);
    CHECK(pts[8].c_rs == 1.5);
    // cheaper setups can only help
    CHECK(pts[0].upsilon <= pts[8].upsilon + 1e-9);
    std::ostringstream out;
    write_sweep_csv(out, pts);
    CHECK(out.str().rfind("c_ps,c_rs,prev_fraction,reloc_fraction,upsilon\n", 0) == 0);
}
