#include "lqgcd/results.hpp"

#include <charconv>
#include <cmath>

namespace lqgcd {

namespace {

std::string field(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }
std::string field(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }
std::string field(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : std::string(); }

// Quotes a CSV field only when it contains a delimiter or quote.
std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
    if (!v)
        return nullptr;
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(*v))
            return nullptr;
    }
    return *v;
}

}  // namespace

const std::vector<std::string>& result_columns() {
    static const std::vector<std::string> cols = {
        "scenario_id", "method",     "horizon",     "budget_or_kappa", "selected_set", "set_cost",
        "objective_f", "analytical_g", "empirical_mean", "empirical_stderr", "runs",      "gamma_exact",
        "gamma_bound", "cert_lhs",   "cert_rhs",    "cert_pass"};
    return cols;
}

std::string format_number(double value) {
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    const auto& cols = result_columns();
    for (std::size_t k = 0; k < cols.size(); ++k)
        out << (k ? "," : "") << cols[k];
    out << '\n';
    for (const ResultRow& r : rows) {
        const std::string cells[] = {quoted(r.scenario_id), quoted(r.method),       std::to_string(r.horizon),
                                     field(r.budget_or_kappa), quoted(r.selected_set), field(r.set_cost),
                                     field(r.objective_f),  field(r.analytical_g),  field(r.empirical_mean),
                                     field(r.empirical_stderr), field(r.runs),      field(r.gamma_exact),
                                     field(r.gamma_bound),  field(r.cert_lhs),      field(r.cert_rhs),
                                     field(r.cert_pass)};
        for (std::size_t k = 0; k < std::size(cells); ++k)
            out << (k ? "," : "") << cells[k];
        out << '\n';
    }
}

nlohmann::json rows_to_json(const std::vector<ResultRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ResultRow& r : rows) {
        nlohmann::json j;
        j["scenario_id"] = r.scenario_id;
        j["method"] = r.method;
        j["horizon"] = r.horizon;
        j["budget_or_kappa"] = opt(r.budget_or_kappa);
        j["selected_set"] = r.selected_set;
        j["set_cost"] = opt(r.set_cost);
        j["objective_f"] = opt(r.objective_f);
        j["analytical_g"] = opt(r.analytical_g);
        j["empirical_mean"] = opt(r.empirical_mean);
        j["empirical_stderr"] = opt(r.empirical_stderr);
        j["runs"] = opt(r.runs);
        j["gamma_exact"] = opt(r.gamma_exact);
        j["gamma_bound"] = opt(r.gamma_bound);
        j["cert_lhs"] = opt(r.cert_lhs);
        j["cert_rhs"] = opt(r.cert_rhs);
        j["cert_pass"] = opt(r.cert_pass);
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace lqgcd
