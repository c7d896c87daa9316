#include "lqgcd/scenario_io.hpp"

#include <fstream>
#include <sstream>

namespace lqgcd {

using nlohmann::json;

namespace {

bool is_matrix_json(const json& j) {
    return j.is_array() && !j.empty() && j.front().is_array() && !j.front().empty() && j.front().front().is_number();
}

bool is_sequence_json(const json& j) { return j.is_array() && !j.empty() && is_matrix_json(j.front()); }

std::vector<Matrix> sequence_from_json(const json& doc, const std::string& key, int horizon) {
    if (!doc.contains(key))
        throw ValidationError(key + ": missing");
    const json& j = doc.at(key);
    if (is_matrix_json(j))
        return std::vector<Matrix>(static_cast<std::size_t>(horizon), matrix_from_json(j, key));
    if (!is_sequence_json(j))
        throw ValidationError(key + ": expected a matrix or an array of matrices");
    if (static_cast<int>(j.size()) != horizon)
        throw ValidationError(key + ": expected " + std::to_string(horizon) + " time steps, got " +
                              std::to_string(j.size()));
    std::vector<Matrix> out;
    out.reserve(j.size());
    for (std::size_t t = 0; t < j.size(); ++t)
        out.push_back(matrix_from_json(j[t], key + "[t=" + std::to_string(t + 1) + "]"));
    return out;
}

json sequence_to_json(const std::vector<Matrix>& seq) {
    bool constant = true;
    for (std::size_t t = 1; t < seq.size() && constant; ++t)
        constant = seq[t].rows() == seq[0].rows() && seq[t].cols() == seq[0].cols() && seq[t] == seq[0];
    if (constant && !seq.empty())
        return matrix_to_json(seq.front());
    json out = json::array();
    for (const auto& m : seq)
        out.push_back(matrix_to_json(m));
    return out;
}

double number_from_json(const json& j, const std::string& field) {
    if (!j.is_number())
        throw ValidationError(field + ": expected a number");
    return j.get<double>();
}

int positive_int_from_json(const json& doc, const std::string& key) {
    if (!doc.contains(key))
        throw ValidationError(key + ": missing");
    const json& j = doc.at(key);
    if (!j.is_number_integer() || j.get<long long>() <= 0)
        throw ValidationError(key + ": must be a positive integer");
    return static_cast<int>(j.get<long long>());
}

}  // namespace

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const std::string& field) {
    if (!is_matrix_json(j))
        throw ValidationError(field + ": expected a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ValidationError(field + ": dimension mismatch, ragged row " + std::to_string(r));
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = number_from_json(row[static_cast<std::size_t>(c)], field);
    }
    return m;
}

Scenario scenario_from_json(const json& doc) {
    if (!doc.is_object())
        throw ValidationError("scenario: expected a JSON object");
    Scenario s;
    LtvSystem& sys = s.system;
    sys.horizon = positive_int_from_json(doc, "horizon");
    sys.state_dim = positive_int_from_json(doc, "state_dim");
    const int T = sys.horizon;
    sys.A = sequence_from_json(doc, "A", T);
    sys.B = sequence_from_json(doc, "B", T);
    sys.W = sequence_from_json(doc, "W", T);
    s.weights.Q = sequence_from_json(doc, "Q", T);
    s.weights.R = sequence_from_json(doc, "R", T);
    if (!doc.contains("sigma_init"))
        throw ValidationError("sigma_init: missing");
    sys.sigma_init = matrix_from_json(doc.at("sigma_init"), "sigma_init");

    if (doc.contains("x1_mean")) {
        const json& mean = doc.at("x1_mean");
        if (!mean.is_array())
            throw ValidationError("x1_mean: expected an array of numbers");
        sys.x1_mean.resize(static_cast<Eigen::Index>(mean.size()));
        for (std::size_t i = 0; i < mean.size(); ++i)
            sys.x1_mean(static_cast<Eigen::Index>(i)) = number_from_json(mean[i], "x1_mean");
    } else {
        sys.x1_mean = Vector::Zero(sys.state_dim);
    }

    if (!doc.contains("sensors") || !doc.at("sensors").is_array())
        throw ValidationError("sensors: expected an array");
    const json& sensors = doc.at("sensors");
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        const json& js = sensors[i];
        const std::string base = "sensors[" + std::to_string(i) + "]";
        if (!js.is_object())
            throw ValidationError(base + ": expected an object");
        Sensor sensor;
        if (js.contains("id")) {
            if (!js.at("id").is_number_integer() || js.at("id").get<long long>() < 0)
                throw ValidationError(base + ".id: must be a nonnegative integer");
            sensor.id = js.at("id").get<SensorId>();
        } else {
            sensor.id = i;
        }
        sensor.C = sequence_from_json(js, "C", T);
        sensor.V = sequence_from_json(js, "V", T);
        sensor.cost = js.contains("cost") ? number_from_json(js.at("cost"), base + ".cost") : 1.0;
        if (js.contains("kind"))
            sensor.kind = js.at("kind").get<std::string>();
        s.suite.sensors.push_back(std::move(sensor));
    }
    if (doc.contains("budget") && !doc.at("budget").is_null())
        s.budget = number_from_json(doc.at("budget"), "budget");
    if (doc.contains("kappa") && !doc.at("kappa").is_null())
        s.kappa = number_from_json(doc.at("kappa"), "kappa");

    validate(s);
    return s;
}

json scenario_to_json(const Scenario& s) {
    json doc;
    doc["horizon"] = s.system.horizon;
    doc["state_dim"] = s.system.state_dim;
    doc["A"] = sequence_to_json(s.system.A);
    doc["B"] = sequence_to_json(s.system.B);
    doc["W"] = sequence_to_json(s.system.W);
    doc["Q"] = sequence_to_json(s.weights.Q);
    doc["R"] = sequence_to_json(s.weights.R);
    doc["sigma_init"] = matrix_to_json(s.system.sigma_init);
    json mean = json::array();
    for (Eigen::Index i = 0; i < s.system.x1_mean.size(); ++i)
        mean.push_back(s.system.x1_mean(i));
    doc["x1_mean"] = std::move(mean);
    json sensors = json::array();
    for (const Sensor& sensor : s.suite.sensors) {
        json js;
        js["id"] = sensor.id;
        js["C"] = sequence_to_json(sensor.C);
        js["V"] = sequence_to_json(sensor.V);
        js["cost"] = sensor.cost;
        if (!sensor.kind.empty())
            js["kind"] = sensor.kind;
        sensors.push_back(std::move(js));
    }
    doc["sensors"] = std::move(sensors);
    if (s.budget)
        doc["budget"] = *s.budget;
    if (s.kappa)
        doc["kappa"] = *s.kappa;
    return doc;
}

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("parse error: ") + e.what());
    }
    try {
        return scenario_from_json(doc);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("schema error: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string dump_scenario(const Scenario& scenario) { return scenario_to_json(scenario).dump(1) + "\n"; }

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot write scenario file '" + path.string() + "'");
    out << dump_scenario(scenario);
}

}  // namespace lqgcd
