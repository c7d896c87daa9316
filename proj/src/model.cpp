#include "lqgcd/model.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>

namespace lqgcd {

SensorSet::SensorSet(std::initializer_list<SensorId> ids) : SensorSet(std::vector<SensorId>(ids)) {}

SensorSet::SensorSet(std::vector<SensorId> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

SensorSet SensorSet::from_mask(std::uint64_t mask) {
    SensorSet s;
    for (SensorId i = 0; mask != 0; ++i, mask >>= 1) {
        if (mask & 1u)
            s.ids_.push_back(i);
    }
    return s;
}

SensorSet SensorSet::range(std::size_t count) {
    SensorSet s;
    s.ids_.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        s.ids_[i] = i;
    return s;
}

bool SensorSet::contains(SensorId id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

SensorSet SensorSet::with(SensorId id) const {
    SensorSet s = *this;
    auto it = std::lower_bound(s.ids_.begin(), s.ids_.end(), id);
    if (it == s.ids_.end() || *it != id)
        s.ids_.insert(it, id);
    return s;
}

SensorSet SensorSet::without(SensorId id) const {
    SensorSet s = *this;
    auto it = std::lower_bound(s.ids_.begin(), s.ids_.end(), id);
    if (it != s.ids_.end() && *it == id)
        s.ids_.erase(it);
    return s;
}

bool SensorSet::is_subset_of(const SensorSet& other) const {
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

std::string SensorSet::to_string(char sep) const {
    std::string out;
    for (std::size_t k = 0; k < ids_.size(); ++k) {
        if (k)
            out += sep;
        out += std::to_string(ids_[k]);
    }
    return out;
}

SensorSet SensorSet::parse(const std::string& text) {
    std::vector<SensorId> ids;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find_first_of(";, ", pos);
        if (next == std::string::npos)
            next = text.size();
        if (next > pos) {
            SensorId value = 0;
            auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + next, value);
            if (ec != std::errc() || ptr != text.data() + next)
                throw ValidationError("invalid sensor id '" + text.substr(pos, next - pos) + "'");
            ids.push_back(value);
        }
        pos = next + 1;
    }
    return SensorSet(std::move(ids));
}

std::size_t SensorSetHash::operator()(const SensorSet& s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (SensorId id : s)
        h = (h ^ std::hash<SensorId>{}(id)) * 0x100000001b3ull;
    return h;
}

const Sensor& SensorSuite::at(SensorId id) const {
    if (id >= sensors.size())
        throw ValidationError("sensor id " + std::to_string(id) + " not in suite of size " +
                              std::to_string(sensors.size()));
    return sensors[id];
}

SensorSet SensorSuite::of_kind(const std::string& kind) const {
    std::vector<SensorId> ids;
    for (const auto& s : sensors) {
        if (s.kind == kind)
            ids.push_back(s.id);
    }
    return SensorSet(std::move(ids));
}

namespace {

std::string at_step(const std::string& field, std::size_t t) {
    return field + "[t=" + std::to_string(t + 1) + "]";
}

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
    if (m.rows() != rows || m.cols() != cols) {
        std::ostringstream os;
        os << where << ": dimension mismatch, expected " << rows << "x" << cols << ", got " << m.rows() << "x"
           << m.cols();
        throw ValidationError(os.str());
    }
}

void require_sequence(const std::vector<Matrix>& seq, int horizon, const std::string& field) {
    if (static_cast<int>(seq.size()) != horizon)
        throw ValidationError(field + ": expected " + std::to_string(horizon) + " time steps, got " +
                              std::to_string(seq.size()));
}

void require_psd(const Matrix& m, const std::string& where, const std::string& what) {
    if (!is_symmetric(m))
        throw ValidationError(where + ": " + what + " not symmetric");
    if (min_eigenvalue(m) < -kPsdTol)
        throw ValidationError(where + ": " + what + " not positive semidefinite");
}

void require_pd(const Matrix& m, const std::string& where, const std::string& what) {
    if (!is_symmetric(m))
        throw ValidationError(where + ": " + what + " not symmetric");
    if (min_eigenvalue(m) <= kPdTol)
        throw ValidationError(where + ": " + what + " not positive definite");
}

}  // namespace

void validate(const Scenario& scenario) {
    const LtvSystem& sys = scenario.system;
    if (sys.horizon <= 0)
        throw ValidationError("horizon: must be a positive integer");
    if (sys.state_dim <= 0)
        throw ValidationError("state_dim: must be a positive integer");
    const int T = sys.horizon;
    const Eigen::Index n = sys.state_dim;

    require_sequence(sys.A, T, "A");
    require_sequence(sys.B, T, "B");
    require_sequence(sys.W, T, "W");
    require_sequence(scenario.weights.Q, T, "Q");
    require_sequence(scenario.weights.R, T, "R");

    for (std::size_t t = 0; t < static_cast<std::size_t>(T); ++t) {
        require_shape(sys.A[t], n, n, at_step("A", t));
        if (sys.B[t].rows() != n)
            require_shape(sys.B[t], n, sys.B[t].cols(), at_step("B", t));
        const Eigen::Index m = sys.B[t].cols();
        require_shape(sys.W[t], n, n, at_step("W", t));
        require_psd(sys.W[t], at_step("W", t), "process noise");
        require_shape(scenario.weights.Q[t], n, n, at_step("Q", t));
        require_psd(scenario.weights.Q[t], at_step("Q", t), "state weight");
        require_shape(scenario.weights.R[t], m, m, at_step("R", t));
        require_pd(scenario.weights.R[t], at_step("R", t), "input weight");
    }
    require_shape(sys.sigma_init, n, n, "sigma_init");
    require_psd(sys.sigma_init, "sigma_init", "initial covariance");
    if (sys.x1_mean.size() != n)
        throw ValidationError("x1_mean: dimension mismatch, expected " + std::to_string(n) + ", got " +
                              std::to_string(sys.x1_mean.size()));

    const auto& sensors = scenario.suite.sensors;
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        const Sensor& s = sensors[i];
        const std::string base = "sensors[" + std::to_string(i) + "]";
        if (s.id != i)
            throw ValidationError(base + ".id: ids must be unique and contiguous 0..|V|-1, got " +
                                  std::to_string(s.id));
        if (!(s.cost >= 0.0))
            throw ValidationError(base + ".cost: must be nonnegative");
        require_sequence(s.C, T, base + ".C");
        require_sequence(s.V, T, base + ".V");
        const Eigen::Index p = s.C.front().rows();
        if (p <= 0)
            throw ValidationError(base + ".C: measurement dimension must be positive");
        for (std::size_t t = 0; t < static_cast<std::size_t>(T); ++t) {
            require_shape(s.C[t], p, n, at_step(base + ".C", t));
            require_shape(s.V[t], p, p, at_step(base + ".V", t));
            require_pd(s.V[t], at_step(base + ".V", t), "sensor noise");
        }
    }
    if (scenario.budget && !(*scenario.budget >= 0.0))
        throw ValidationError("budget: must be nonnegative");
    if (scenario.kappa && !(*scenario.kappa >= 0.0))
        throw ValidationError("kappa: must be nonnegative");
}

StackedSensors stack_sensors(const SensorSuite& suite, const SensorSet& set, int t, int state_dim) {
    Eigen::Index rows = 0;
    for (SensorId id : set)
        rows += suite.at(id).C.at(static_cast<std::size_t>(t)).rows();
    StackedSensors out{Matrix::Zero(rows, state_dim), Matrix::Zero(rows, rows)};
    Eigen::Index r = 0;
    for (SensorId id : set) {
        const Sensor& s = suite.at(id);
        const Matrix& c = s.C[static_cast<std::size_t>(t)];
        const Eigen::Index p = c.rows();
        out.C.middleRows(r, p) = c;
        out.V.block(r, r, p, p) = s.V[static_cast<std::size_t>(t)];
        r += p;
    }
    return out;
}

double set_cost(const SensorSuite& suite, const SensorSet& set) {
    double total = 0.0;
    for (SensorId id : set)
        total += suite.at(id).cost;
    return total;
}

}  // namespace lqgcd
