#include "lqgcd/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <boost/random/normal_distribution.hpp>

#include "lqgcd/rng.hpp"

namespace lqgcd {

namespace {

Vector gaussian(SplitMix64& rng, Eigen::Index dim) {
    boost::random::normal_distribution<double> normal;
    Vector z(dim);
    for (Eigen::Index k = 0; k < dim; ++k)
        z(k) = normal(rng);
    return z;
}

double sample_std_error(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2)
        return 0.0;
    std::vector<double> sq(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k)
        sq[k] = (xs[k] - mean) * (xs[k] - mean);
    const double var = pairwise_sum(sq.data(), sq.size()) / static_cast<double>(xs.size() - 1);
    return std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace

double pairwise_sum(const double* data, std::size_t count) {
    if (count <= 8) {
        double s = 0.0;
        for (std::size_t k = 0; k < count; ++k)
            s += data[k];
        return s;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

ClosedLoopSimulator::ClosedLoopSimulator(const Scenario& scenario, const RiccatiSolution& sol, const SensorSet& set)
    : scenario_(scenario), sol_(sol) {
    const CovarianceTrajectory traj = propagate_covariance(scenario, set);
    const int n = scenario.state_dim();
    init_factor_ = sqrt_factor_psd(scenario.system.sigma_init);
    for (int t = 0; t < scenario.horizon(); ++t) {
        const auto k = static_cast<std::size_t>(t);
        StackedSensors st = stack_sensors(scenario.suite, set, t, n);
        w_factor_.push_back(sqrt_factor_psd(scenario.system.W[k]));
        if (set.empty()) {
            v_factor_.emplace_back(0, 0);
            gain_.push_back(Matrix::Zero(n, 0));
        } else {
            v_factor_.push_back(sqrt_factor_psd(st.V));
            gain_.push_back(traj.posterior[k] * st.C.transpose() * inverse_spd(st.V));
        }
        C_.push_back(std::move(st.C));
    }
}

SimulationRecord ClosedLoopSimulator::run(int run_id, std::uint64_t seed) const {
    const LtvSystem& sys = scenario_.system;
    const auto T = static_cast<std::size_t>(sys.horizon);
    SplitMix64 rng(seed);

    SimulationRecord rec;
    rec.run_id = run_id;
    rec.seed = seed;
    Vector x = sys.x1_mean + init_factor_ * gaussian(rng, init_factor_.cols());
    Vector predicted = sys.x1_mean;
    rec.states.push_back(x);
    for (std::size_t t = 0; t < T; ++t) {
        Vector estimate = predicted;
        if (C_[t].rows() > 0) {
            const Vector y = C_[t] * x + v_factor_[t] * gaussian(rng, v_factor_[t].cols());
            estimate += gain_[t] * (y - C_[t] * predicted);
        }
        const Vector u = sol_.K[t] * estimate;
        const Vector miss = sol_.K[t] * (x - estimate);
        rec.control_mismatch += miss.dot(sol_.M[t] * miss);

        x = sys.A[t] * x + sys.B[t] * u + w_factor_[t] * gaussian(rng, w_factor_[t].cols());
        predicted = sys.A[t] * estimate + sys.B[t] * u;

        rec.realized_cost += x.dot(scenario_.weights.Q[t] * x) + u.dot(scenario_.weights.R[t] * u);
        rec.estimates.push_back(std::move(estimate));
        rec.controls.push_back(u);
        rec.states.push_back(x);
    }
    return rec;
}

SimulationRecord run_closed_loop(const Scenario& scenario, const RiccatiSolution& sol, const SensorSet& set,
                                 std::uint64_t seed) {
    return ClosedLoopSimulator(scenario, sol, set).run(0, seed);
}

MonteCarloSummary monte_carlo(const Scenario& scenario, const RiccatiSolution& sol, const SensorSet& set, int runs,
                              std::uint64_t base_seed, int threads) {
    if (runs < 1)
        throw ValidationError("runs: must be at least 1");
    const ClosedLoopSimulator sim(scenario, sol, set);
    const auto count = static_cast<std::size_t>(runs);
    std::vector<double> costs(count), mismatch(count);
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t k = first; k < count; k += stride) {
            const SimulationRecord rec = sim.run(static_cast<int>(k), base_seed + k);
            costs[k] = rec.realized_cost;
            mismatch[k] = rec.control_mismatch;
        }
    };
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, threads)), count);
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work, w, workers);
    }

    MonteCarloSummary s;
    s.run_count = runs;
    s.mean_cost = pairwise_sum(costs.data(), count) / static_cast<double>(count);
    s.std_error = sample_std_error(costs, s.mean_cost);
    s.mean_mismatch = pairwise_sum(mismatch.data(), count) / static_cast<double>(count);
    s.mismatch_std_error = sample_std_error(mismatch, s.mean_mismatch);
    s.analytical_f = sensing_objective(sol, propagate_covariance(scenario, set));
    s.analytical_g = s.analytical_f + lqg_constant(scenario, sol);
    return s;
}

}  // namespace lqgcd
