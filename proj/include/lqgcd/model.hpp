#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lqgcd/linalg.hpp"

namespace lqgcd {

using SensorId = std::size_t;

// Raised for malformed or inconsistent problem data. The message names the
// offending field and, where relevant, the (1-based) time index.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A set of sensor ids kept sorted ascending and duplicate-free, so every
// stacked quantity derived from it follows the ground-set order.
class SensorSet {
  public:
    SensorSet() = default;
    SensorSet(std::initializer_list<SensorId> ids);
    explicit SensorSet(std::vector<SensorId> ids);

    // Members are the set bits of `mask` (bit i <-> sensor i).
    [[nodiscard]] static SensorSet from_mask(std::uint64_t mask);
    [[nodiscard]] static SensorSet range(std::size_t count);

    [[nodiscard]] bool contains(SensorId id) const;
    [[nodiscard]] bool empty() const { return ids_.empty(); }
    [[nodiscard]] std::size_t size() const { return ids_.size(); }
    [[nodiscard]] const std::vector<SensorId>& ids() const { return ids_; }
    [[nodiscard]] auto begin() const { return ids_.begin(); }
    [[nodiscard]] auto end() const { return ids_.end(); }

    [[nodiscard]] SensorSet with(SensorId id) const;
    [[nodiscard]] SensorSet without(SensorId id) const;
    [[nodiscard]] bool is_subset_of(const SensorSet& other) const;

    // "0;2;5" form used in result tables; empty set renders as "".
    [[nodiscard]] std::string to_string(char sep = ';') const;
    [[nodiscard]] static SensorSet parse(const std::string& text);

    friend bool operator==(const SensorSet&, const SensorSet&) = default;
    friend auto operator<=>(const SensorSet& a, const SensorSet& b) { return a.ids_ <=> b.ids_; }

  private:
    std::vector<SensorId> ids_;
};

struct SensorSetHash {
    std::size_t operator()(const SensorSet& s) const noexcept;
};

// x_{t+1} = A_t x_t + B_t u_t + w_t, w_t ~ N(0, W_t), x_1 ~ N(x1_mean, sigma_init).
// All sequences are indexed 0..horizon-1 for t = 1..T.
struct LtvSystem {
    int horizon = 0;
    int state_dim = 0;
    std::vector<Matrix> A;
    std::vector<Matrix> B;
    std::vector<Matrix> W;
    Matrix sigma_init;
    Vector x1_mean;

    [[nodiscard]] int input_dim(int t) const { return static_cast<int>(B[static_cast<std::size_t>(t)].cols()); }
};

struct Sensor {
    SensorId id = 0;
    std::vector<Matrix> C;  // p x n per step
    std::vector<Matrix> V;  // p x p per step, positive definite
    double cost = 0.0;
    std::string kind;       // free-form tag ("gps", "lidar", ...); may be empty

    [[nodiscard]] int measurement_dim() const { return C.empty() ? 0 : static_cast<int>(C.front().rows()); }
};

struct SensorSuite {
    std::vector<Sensor> sensors;

    [[nodiscard]] std::size_t size() const { return sensors.size(); }
    [[nodiscard]] const Sensor& at(SensorId id) const;
    [[nodiscard]] SensorSet all() const { return SensorSet::range(sensors.size()); }
    [[nodiscard]] SensorSet of_kind(const std::string& kind) const;
};

struct LqgWeights {
    std::vector<Matrix> Q;
    std::vector<Matrix> R;
};

struct Scenario {
    LtvSystem system;
    SensorSuite suite;
    LqgWeights weights;
    std::optional<double> budget;
    std::optional<double> kappa;

    [[nodiscard]] int horizon() const { return system.horizon; }
    [[nodiscard]] int state_dim() const { return system.state_dim; }
};

// Checks every dimension and definiteness invariant; throws ValidationError.
void validate(const Scenario& scenario);

// Row-stacked C_t(S) and block-diagonal V_t(S) in ascending id order.
// `t` is 0-based. S = {} yields 0 x n and 0 x 0 matrices.
struct StackedSensors {
    Matrix C;
    Matrix V;
};
[[nodiscard]] StackedSensors stack_sensors(const SensorSuite& suite, const SensorSet& set, int t, int state_dim);

[[nodiscard]] double set_cost(const SensorSuite& suite, const SensorSet& set);

// c <= b with a relative slack for accumulated floating-point sums of costs.
[[nodiscard]] inline bool fits_budget(double cost, double budget) {
    return cost <= budget + 1e-12 * std::max(1.0, budget);
}

}  // namespace lqgcd
