#pragma once

#include "cbmspares/experiments.hpp"
#include "cbmspares/instance_gen.hpp"
#include "cbmspares/model.hpp"

namespace test_support {

using namespace cbmspares;

/// Two warehouses, two machines; warehouse 1 near machine 1, warehouse 2 near machine 2.
inline NetworkInstance two_by_two() {
    NetworkInstance inst;
    inst.I = 2;
    inst.J = 2;
    inst.R = {{2.0, 14.0}, {16.0, 3.0}};
    return inst;
}

inline ModelParams params_for(const NetworkInstance& inst, int N = 2, int K = 2, double rho = 1.0, int setting = 1) {
    ModelParams p;
    p.instance = inst;
    p.degradation = DegradationModel::uniform(N);
    p.K = K;
    p.gamma = gamma_from_load(rho, inst.J, N, K);
    p.lambda = 0.95;
    p.costs = CostParams::setting(setting);
    p.validate();
    return p;
}

inline ModelParams generated(std::uint64_t seed, int N = 2, int K = 2, double rho = 1.0, int setting = 1) {
    GeneratorConfig gc;
    gc.seed = seed;
    return params_for(generate_instance(gc), N, K, rho, setting);
}

}  // namespace test_support
