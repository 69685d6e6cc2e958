#pragma once

#include <cstdint>
#include <stdexcept>

#include "cbmspares/model.hpp"

namespace cbmspares {

struct GeneratorConfig {
    std::uint64_t seed = 0;
    int I = 2;
    int J = 2;
    double square_side = 33.0;
    double t_star = 10.0;
    std::uint64_t max_resamples = 100'000;

    void validate() const;
};

class InfeasibleInstance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Places warehouses and machines uniformly at random in the square and
 * resamples the whole placement until every machine has a warehouse within
 * t* and every warehouse has a machine within t*. R holds Euclidean distances.
 *
 * Deterministic in the seed. Throws InfeasibleInstance after max_resamples
 * rejected placements.
 */
NetworkInstance generate_instance(const GeneratorConfig& cfg);

/// gamma such that rho = J / (N gamma K).
double gamma_from_load(double rho, int J, int N, int K);

/// rho = J / (N gamma K).
double load_from_gamma(double gamma, int J, int N, int K);

}  // namespace cbmspares
