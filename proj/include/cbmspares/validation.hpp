#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "cbmspares/model.hpp"

namespace cbmspares {

struct LiteralTransition {
    SystemState target;
    double rate;
};

/**
 * Transition rates out of (state, action) written family by family exactly as
 * the model states them: replenishment epochs, failure epochs with a dispatch,
 * degradation epochs with a preventive dispatch, and degradation/repair epochs
 * with at most a relocation; the dummy self-transition uses the closed-form
 * rate of each family. Shares no code with the generic event generator.
 *
 * Entries are not merged; targets may repeat. Throws std::invalid_argument if
 * the action does not fit the epoch.
 */
std::vector<LiteralTransition> literal_transitions(const SystemState& state, const Action& action,
                                                   const ModelParams& params);

struct CheckResult {
    std::string name;
    bool passed = true;
    std::size_t checked = 0;  // items inspected
    std::size_t failures = 0;
    std::string first_failure;
};

struct ValidationOptions {
    /// Pairs compared against the literal formulas; all pairs when the model has at most this many.
    std::size_t literal_samples = 20'000;
    std::uint64_t seed = 0;
    double tolerance = 1e-12;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    std::size_t states = 0;
    std::size_t pairs = 0;
    double seconds = 0.0;

    bool passed() const;
    nlohmann::json to_json() const;
};

/**
 * Structural invariant suite over every state and every action admissible in
 * the most flexible class (which contains the actions of all other classes):
 * row totals equal tau, dummy rates are nonnegative, K is conserved, successor
 * rows are valid distributions, class action sets are nested, and generic rows
 * agree with literal_transitions.
 */
ValidationReport validate_model(const ModelParams& params, const ValidationOptions& options = {});

}  // namespace cbmspares
