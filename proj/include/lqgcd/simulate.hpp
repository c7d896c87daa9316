#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lqgcd/kalman.hpp"

namespace lqgcd {

struct SimulationRecord {
    int run_id = 0;
    std::uint64_t seed = 0;
    std::vector<Vector> states;     // x_1 .. x_{T+1}
    std::vector<Vector> estimates;  // filtered estimates x_hat_{t|t}, t = 1..T
    std::vector<Vector> controls;   // u_t = K_t x_hat_{t|t}
    double realized_cost = 0.0;     // sum_t |x_{t+1}|^2_Q + |u_t|^2_R
    double control_mismatch = 0.0;  // sum_t |K_t (x_t - x_hat_{t|t})|^2_M
};

struct MonteCarloSummary {
    std::string method;
    double mean_cost = 0.0;
    double std_error = 0.0;
    int run_count = 0;
    double analytical_g = 0.0;
    double mean_mismatch = 0.0;
    double mismatch_std_error = 0.0;
    double analytical_f = 0.0;
};

// Kalman filter plus certainty-equivalent controller for one fixed sensor
// set. Gains and noise factors are precomputed; run() is const and can be
// called from several threads.
class ClosedLoopSimulator {
  public:
    ClosedLoopSimulator(const Scenario& scenario, const RiccatiSolution& sol, const SensorSet& set);

    [[nodiscard]] SimulationRecord run(int run_id, std::uint64_t seed) const;

  private:
    const Scenario& scenario_;
    const RiccatiSolution& sol_;
    std::vector<Matrix> C_;         // stacked measurement matrices
    std::vector<Matrix> v_factor_;  // F with F F^T = V_t(S)
    std::vector<Matrix> w_factor_;
    std::vector<Matrix> gain_;      // Sigma_{t|t} C^T V^{-1}
    Matrix init_factor_;
};

[[nodiscard]] SimulationRecord run_closed_loop(const Scenario& scenario, const RiccatiSolution& sol,
                                               const SensorSet& set, std::uint64_t seed);

// Runs `runs` simulations with seeds base_seed + run_id.
[[nodiscard]] MonteCarloSummary monte_carlo(const Scenario& scenario, const RiccatiSolution& sol, const SensorSet& set,
                                            int runs, std::uint64_t base_seed, int threads = 1);

// Pairwise summation, so the mean does not depend on how runs were batched.
[[nodiscard]] double pairwise_sum(const double* data, std::size_t count);

}  // namespace lqgcd
