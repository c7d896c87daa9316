#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "lqgcd/model.hpp"

namespace lqgcd {

// Scenario files are JSON objects with keys horizon, state_dim, A, B, W, Q, R,
// sigma_init, x1_mean, sensors[{id, C, V, cost, kind?}], budget?, kappa?.
// Matrices are row-major nested arrays. A per-step quantity may be a single
// matrix, broadcast over the horizon, or an array with one matrix per step.
[[nodiscard]] Scenario scenario_from_json(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json scenario_to_json(const Scenario& scenario);

// Parse + validate. Malformed JSON is reported as a ValidationError.
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);
[[nodiscard]] Scenario parse_scenario(const std::string& text);

// Deterministic text: sorted keys, shortest round-trip doubles, sequences
// collapsed to one matrix when constant over the horizon.
[[nodiscard]] std::string dump_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

[[nodiscard]] nlohmann::json matrix_to_json(const Matrix& m);
[[nodiscard]] Matrix matrix_from_json(const nlohmann::json& j, const std::string& field);

}  // namespace lqgcd
