#pragma once

#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "lqgcd/model.hpp"
#include "lqgcd/riccati.hpp"

namespace lqgcd {

// Sigma_{t|t}(S) and Sigma_{t|t-1}(S), indexed 0..T-1 for t = 1..T.
// prior[0] is the initial covariance.
struct CovarianceTrajectory {
    std::vector<Matrix> posterior;
    std::vector<Matrix> prior;
};

// V^{-1/2} C
[[nodiscard]] Matrix whiten(const Matrix& C, const Matrix& V);

// Kalman covariance recursion in information form, with the whitened
// per-sensor information C_bar^T C_bar cached once per (sensor, step).
class CovariancePropagator {
  public:
    explicit CovariancePropagator(const Scenario& scenario);

    [[nodiscard]] CovarianceTrajectory propagate(const SensorSet& set) const;

    [[nodiscard]] const Matrix& whitened(SensorId id, int t) const;
    [[nodiscard]] const Matrix& information(SensorId id, int t) const;
    [[nodiscard]] std::size_t sensor_count() const { return whitened_.size(); }

  private:
    int horizon_;
    std::vector<Matrix> A_;
    std::vector<Matrix> W_;
    Matrix sigma_init_;
    std::vector<std::vector<Matrix>> whitened_;     // [sensor][t]
    std::vector<std::vector<Matrix>> information_;  // [sensor][t]
};

[[nodiscard]] CovarianceTrajectory propagate_covariance(const Scenario& scenario, const SensorSet& set);

// f(S) = sum_t tr(Theta_t Sigma_{t|t}(S))
[[nodiscard]] double sensing_objective(const RiccatiSolution& sol, const CovarianceTrajectory& traj);

// Sensor-independent part of the optimal LQG cost:
// x1_mean^T N_1 x1_mean + tr(Sigma_init N_1) + sum_t tr(W_t S_t).
[[nodiscard]] double lqg_constant(const Scenario& scenario, const RiccatiSolution& sol);

// g(S) = lqg_constant + f(S), the optimal LQG cost with sensors S active.
[[nodiscard]] double optimal_lqg_cost(const Scenario& scenario, const RiccatiSolution& sol, const SensorSet& set);

// kappa - lqg_constant; throws ValidationError when the scenario has no kappa.
[[nodiscard]] double kappa_bar(const Scenario& scenario, const RiccatiSolution& sol);
[[nodiscard]] double kappa_bar(double kappa, const Scenario& scenario, const RiccatiSolution& sol);

// (1/T) sum_t log det Sigma_{t|t}(S)
[[nodiscard]] double logdet_objective(const CovarianceTrajectory& traj);

// Memoized set functions over one scenario. Thread-safe; values for a given
// set are computed once and reused by every selector in the process.
class SensingObjective {
  public:
    SensingObjective(Scenario scenario, RiccatiSolution sol);

    [[nodiscard]] double f(const SensorSet& set) const;
    [[nodiscard]] double g(const SensorSet& set) const { return f(set) + constant_; }
    [[nodiscard]] double logdet(const SensorSet& set) const;
    [[nodiscard]] double constant() const { return constant_; }

    // Evaluates f on every set, spreading the work over `threads` workers.
    [[nodiscard]] std::vector<double> f_many(const std::vector<SensorSet>& sets, int threads = 1) const;
    [[nodiscard]] std::vector<double> logdet_many(const std::vector<SensorSet>& sets, int threads = 1) const;

    [[nodiscard]] CovarianceTrajectory trajectory(const SensorSet& set) const { return propagator_.propagate(set); }

    [[nodiscard]] const Scenario& scenario() const { return scenario_; }
    [[nodiscard]] const RiccatiSolution& solution() const { return sol_; }
    [[nodiscard]] const CovariancePropagator& propagator() const { return propagator_; }
    [[nodiscard]] std::size_t ground_size() const { return scenario_.suite.size(); }
    [[nodiscard]] std::size_t evaluations() const;

  private:
    struct Entry {
        double f;
        double logdet;
        bool has_logdet;
    };
    using Memo = std::unordered_map<SensorSet, Entry, SensorSetHash>;

    Entry compute(const SensorSet& set, bool want_logdet) const;
    std::vector<double> many(const std::vector<SensorSet>& sets, int threads, bool logdet) const;

    Scenario scenario_;
    RiccatiSolution sol_;
    CovariancePropagator propagator_;
    double constant_;
    mutable std::mutex mutex_;
    mutable Memo memo_;
    mutable std::size_t evaluations_ = 0;
};

}  // namespace lqgcd
