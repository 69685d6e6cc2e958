#include "cbmspares/instance_gen.hpp"

#include <cmath>
#include <random>
#include <string>

#include "cbmspares/random.hpp"

namespace cbmspares {

void GeneratorConfig::validate() const {
    if (I < 1 || J < 1) throw std::invalid_argument("generator: I and J must be >= 1");
    if (!(square_side > 0.0)) throw std::invalid_argument("generator: square_side must be > 0");
    if (!(t_star > 0.0)) throw std::invalid_argument("generator: t_star must be > 0");
    if (max_resamples < 1) throw std::invalid_argument("generator: max_resamples must be >= 1");
}

NetworkInstance generate_instance(const GeneratorConfig& cfg) {
    cfg.validate();
    std::mt19937_64 gen(cfg.seed);

    NetworkInstance inst;
    inst.I = cfg.I;
    inst.J = cfg.J;
    inst.t_star = cfg.t_star;
    inst.square_side = cfg.square_side;
    inst.seed = cfg.seed;
    inst.warehouses.resize(static_cast<std::size_t>(cfg.I));
    inst.machines.resize(static_cast<std::size_t>(cfg.J));
    inst.R.assign(static_cast<std::size_t>(cfg.I), std::vector<double>(static_cast<std::size_t>(cfg.J)));

    auto draw = [&](Point& p) {
        p.x = uniform01(gen) * cfg.square_side;
        p.y = uniform01(gen) * cfg.square_side;
    };

    for (std::uint64_t attempt = 0; attempt < cfg.max_resamples; ++attempt) {
        for (auto& w : inst.warehouses) draw(w);
        for (auto& m : inst.machines) draw(m);

        std::vector<bool> machine_covered(inst.machines.size(), false);
        bool every_warehouse_useful = true;
        for (std::size_t i = 0; i < inst.warehouses.size(); ++i) {
            bool useful = false;
            for (std::size_t m = 0; m < inst.machines.size(); ++m) {
                const double d = std::hypot(inst.warehouses[i].x - inst.machines[m].x,
                                            inst.warehouses[i].y - inst.machines[m].y);
                inst.R[i][m] = d;
                if (d <= cfg.t_star) {
                    useful = true;
                    machine_covered[m] = true;
                }
            }
            every_warehouse_useful = every_warehouse_useful && useful;
        }
        bool every_machine_covered = true;
        for (bool c : machine_covered) every_machine_covered = every_machine_covered && c;
        if (every_warehouse_useful && every_machine_covered) return inst;
    }
    throw InfeasibleInstance("no feasible placement for seed " + std::to_string(cfg.seed) + " after " +
                             std::to_string(cfg.max_resamples) + " resamples");
}

double gamma_from_load(double rho, int J, int N, int K) {
    if (!(rho > 0.0)) throw std::invalid_argument("load: rho must be > 0");
    if (J < 1 || N < 1 || K < 1) throw std::invalid_argument("load: J, N and K must be >= 1");
    return static_cast<double>(J) / (static_cast<double>(N) * rho * static_cast<double>(K));
}

double load_from_gamma(double gamma, int J, int N, int K) {
    if (!(gamma > 0.0)) throw std::invalid_argument("load: gamma must be > 0");
    if (J < 1 || N < 1 || K < 1) throw std::invalid_argument("load: J, N and K must be >= 1");
    return static_cast<double>(J) / (static_cast<double>(N) * gamma * static_cast<double>(K));
}

}  // namespace cbmspares
