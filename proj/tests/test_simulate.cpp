#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lqgcd/simulate.hpp"

using namespace lqgcd;

TEST_SUITE("simulate") {

TEST_CASE("a run is a pure function of its seed") {
    const Scenario s = build_random_scenario(fixtures::small_options(3, 4, 4), 2);
    const RiccatiSolution sol = solve_riccati(s.system, s.weights);
    const SimulationRecord a = run_closed_loop(s, sol, SensorSet{0, 2}, 42);
    const SimulationRecord b = run_closed_loop(s, sol, SensorSet{0, 2}, 42);
    const SimulationRecord c = run_closed_loop(s, sol, SensorSet{0, 2}, 43);
    CHECK(a.realized_cost == b.realized_cost);
    CHECK(a.states.back() == b.states.back());
    CHECK(a.realized_cost != c.realized_cost);
    CHECK(a.states.size() == 5);
    CHECK(a.estimates.size() == 4);
    CHECK(a.controls.size() == 4);
}

TEST_CASE("controls are the certainty-equivalent gains applied to the estimate") {
    const Scenario s = build_random_scenario(fixtures::small_options(3, 5, 3), 6);
    const RiccatiSolution sol = solve_riccati(s.system, s.weights);
    const SimulationRecord r = run_closed_loop(s, sol, SensorSet{1}, 9);
    double cost = 0.0;
    for (std::size_t t = 0; t < 5; ++t) {
        CHECK((r.controls[t] - sol.K[t] * r.estimates[t]).norm() < 1e-12);
        const Vector& x = r.states[t + 1];
        cost += x.dot(s.weights.Q[t] * x) + r.controls[t].dot(s.weights.R[t] * r.controls[t]);
    }
    CHECK(r.realized_cost == doctest::Approx(cost).epsilon(1e-12));
}

TEST_CASE("noise-free open sensing reduces to deterministic regulation") {
    auto opts = fixtures::small_options(3, 4, 2);
    opts.random_mean = true;
    Scenario s = build_random_scenario(opts, 14);
    s.system.sigma_init.setZero();
    for (auto& w : s.system.W)
        w.setZero();
    const RiccatiSolution sol = solve_riccati(s.system, s.weights);
    const fixtures::NaiveLqr ref = fixtures::naive_lqr(s);
    const Vector& mu = s.system.x1_mean;
    const SimulationRecord r = run_closed_loop(s, sol, {}, 1);
    CHECK(r.realized_cost == doctest::Approx(mu.dot(ref.P[0] * mu)).epsilon(1e-10));
    CHECK(r.control_mismatch == 0.0);
}

TEST_CASE("monte carlo bookkeeping") {
    const Scenario s = build_random_scenario(fixtures::small_options(2, 3, 3), 5);
    const RiccatiSolution sol = solve_riccati(s.system, s.weights);
    const MonteCarloSummary one = monte_carlo(s, sol, SensorSet{0}, 1, 100);
    CHECK(one.run_count == 1);
    CHECK(one.mean_cost == run_closed_loop(s, sol, SensorSet{0}, 100).realized_cost);
    CHECK(one.std_error == 0.0);
    CHECK(one.analytical_g == doctest::Approx(optimal_lqg_cost(s, sol, SensorSet{0})).epsilon(1e-12));
    CHECK_THROWS_AS((void)monte_carlo(s, sol, SensorSet{0}, 0, 1), ValidationError);
}

TEST_CASE("thread count does not change the summary") {
    const Scenario s = build_random_scenario(fixtures::small_options(3, 4, 4), 8);
    const RiccatiSolution sol = solve_riccati(s.system, s.weights);
    const MonteCarloSummary serial = monte_carlo(s, sol, SensorSet{1, 3}, 257, 7, 1);
    const MonteCarloSummary parallel = monte_carlo(s, sol, SensorSet{1, 3}, 257, 7, 5);
    CHECK(serial.mean_cost == parallel.mean_cost);
    CHECK(serial.std_error == parallel.std_error);
    CHECK(serial.mean_mismatch == parallel.mean_mismatch);
}

TEST_CASE("run k of a batch uses seed base plus k") {
    const Scenario s = fixtures::scalar_two_sensor();
    const RiccatiSolution sol = solve_riccati(s.system, s.weights);
    const ClosedLoopSimulator sim(s, sol, SensorSet{0});
    double total = 0.0;
    for (int k = 0; k < 3; ++k)
        total += sim.run(k, 50 + static_cast<std::uint64_t>(k)).realized_cost;
    CHECK(monte_carlo(s, sol, SensorSet{0}, 3, 50).mean_cost == doctest::Approx(total / 3.0).epsilon(1e-14));
}

TEST_CASE("empirical mean cost agrees with the analytical cost") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto opts = fixtures::small_options(2, 4, 3);
        opts.random_mean = true;
        const Scenario s = build_random_scenario(opts, seed);
        const RiccatiSolution sol = solve_riccati(s.system, s.weights);
        for (const SensorSet& set : {SensorSet{}, SensorSet{0, 1, 2}}) {
            const MonteCarloSummary mc = monte_carlo(s, sol, set, 4000, 1000 * seed, 4);
            CHECK_MESSAGE(std::abs(mc.mean_cost - mc.analytical_g) < 3.0 * mc.std_error,
                          "seed " << seed << " mean " << mc.mean_cost << " g " << mc.analytical_g);
        }
    }
}

TEST_CASE("control mismatch averages to the sensing objective") {
    const Scenario s = build_random_scenario(fixtures::small_options(3, 5, 4), 19);
    const RiccatiSolution sol = solve_riccati(s.system, s.weights);
    const MonteCarloSummary mc = monte_carlo(s, sol, SensorSet{0, 3}, 10000, 3, 4);
    CHECK(std::abs(mc.mean_mismatch - mc.analytical_f) < 0.05 * mc.analytical_f);
}

TEST_CASE("estimation error covariance matches the filter covariance") {
    const Scenario s = build_random_scenario(fixtures::small_options(2, 3, 3), 23);
    const RiccatiSolution sol = solve_riccati(s.system, s.weights);
    const SensorSet set{0, 2};
    const CovarianceTrajectory traj = propagate_covariance(s, set);
    const ClosedLoopSimulator sim(s, sol, set);
    const int runs = 20000;
    Matrix second = Matrix::Zero(2, 2);
    for (int k = 0; k < runs; ++k) {
        const SimulationRecord r = sim.run(k, static_cast<std::uint64_t>(k));
        const Vector e = r.states[2] - r.estimates[2];
        second += e * e.transpose();
    }
    second /= runs;
    CHECK((second - traj.posterior[2]).norm() < 0.05 * traj.posterior[2].norm());
}

TEST_CASE("pairwise summation") {
    std::vector<double> xs(1000, 0.1);
    CHECK(pairwise_sum(xs.data(), xs.size()) == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(pairwise_sum(xs.data(), 0) == 0.0);
}

}  // TEST_SUITE
