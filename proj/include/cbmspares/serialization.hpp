#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "cbmspares/model.hpp"
#include "cbmspares/solver.hpp"
#include "cbmspares/state_space.hpp"

namespace cbmspares {

/// Malformed input. The message names the file position or JSON pointer.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json instance_to_json(const NetworkInstance& inst);
NetworkInstance instance_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const ModelParams& params);
ModelParams params_from_json(const nlohmann::json& j);

nlohmann::json action_to_json(const Action& a);

/// Model parameters, then one record per state (F, P, C, j, action, V, pi),
/// then upsilon, delta, iteration count, residuals and the stationary method.
nlohmann::json solution_to_json(const PolicySolution& sol, const ModelParams& params, const StateSpace& space,
                                std::optional<double> delta_pct = std::nullopt);

struct LoadedSolution {
    ModelParams params;
    PolicyClass cls = PolicyClass::CF;
    std::vector<Action> policy;
    std::vector<double> V;
    double upsilon = 0.0;
};

/// Reads back what solution_to_json wrote; states must match the enumeration order.
LoadedSolution solution_from_json(const nlohmann::json& j);

/// Parses a JSON file; syntax errors carry the file name, line and column.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Writes `j` with two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace cbmspares
