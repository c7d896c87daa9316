#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace lqgcd {

// One line of an experiment table. Absent values print as empty CSV fields
// and as null in JSON.
struct ResultRow {
    std::string scenario_id;
    std::string method;
    int horizon = 0;
    std::optional<double> budget_or_kappa;
    std::string selected_set;
    std::optional<double> set_cost;
    std::optional<double> objective_f;
    std::optional<double> analytical_g;
    std::optional<double> empirical_mean;
    std::optional<double> empirical_stderr;
    std::optional<int> runs;
    std::optional<double> gamma_exact;
    std::optional<double> gamma_bound;
    std::optional<double> cert_lhs;
    std::optional<double> cert_rhs;
    std::optional<bool> cert_pass;
};

[[nodiscard]] const std::vector<std::string>& result_columns();

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
[[nodiscard]] nlohmann::json rows_to_json(const std::vector<ResultRow>& rows);

// Shortest round-trip decimal form, so identical runs give identical bytes.
[[nodiscard]] std::string format_number(double value);

}  // namespace lqgcd
