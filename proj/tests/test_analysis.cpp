#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "lqgcd/analysis.hpp"

using namespace lqgcd;

namespace {

struct Instance {
    Scenario scenario;
    RiccatiSolution sol;
    SensingObjective obj;

    explicit Instance(Scenario s)
        : scenario(std::move(s)), sol(solve_riccati(scenario.system, scenario.weights)), obj(scenario, sol) {}
};

double direct_f(const Scenario& s, const RiccatiSolution& sol, std::uint64_t mask) {
    return sensing_objective(sol, propagate_covariance(s, SensorSet::from_mask(mask)));
}

// Ratio by plain double loop over mask pairs, evaluating f from scratch.
double brute_force_gamma(const Scenario& s, const RiccatiSolution& sol) {
    const std::size_t n = s.suite.size();
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<double> f(count);
    for (std::uint64_t m = 0; m < count; ++m)
        f[m] = direct_f(s, sol, m);
    double gamma = std::numeric_limits<double>::infinity();
    for (std::uint64_t b = 0; b < count; ++b) {
        for (std::uint64_t a = 0; a < count; ++a) {
            if ((a & ~b) != 0)
                continue;
            for (std::size_t x = 0; x < n; ++x) {
                const std::uint64_t bit = std::uint64_t{1} << x;
                if (b & bit)
                    continue;
                const double num = f[a] - f[a | bit];
                const double den = f[b] - f[b | bit];
                if (den < 1e-12)
                    continue;
                gamma = std::min(gamma, num < 1e-12 ? 0.0 : num / den);
            }
        }
    }
    return std::isinf(gamma) ? 1.0 : std::clamp(gamma, 0.0, 1.0);
}

// Every marginal drop shrinks as the base set grows.
bool supermodular_by_enumeration(const Scenario& s, const RiccatiSolution& sol) {
    const std::size_t n = s.suite.size();
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t b = 0; b < count; ++b)
        for (std::uint64_t a = 0; a < count; ++a) {
            if ((a & ~b) != 0)
                continue;
            for (std::size_t x = 0; x < n; ++x) {
                const std::uint64_t bit = std::uint64_t{1} << x;
                if (b & bit)
                    continue;
                if (direct_f(s, sol, a) - direct_f(s, sol, a | bit) < direct_f(s, sol, b) - direct_f(s, sol, b | bit) - 1e-12)
                    return false;
            }
        }
    return true;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("scalar two-sensor instance is supermodular") {
    const Instance in(fixtures::scalar_two_sensor());
    const RatioReport r = exact_supermodularity_ratio(in.obj);
    REQUIRE(r.exact_gamma);
    CHECK(std::abs(*r.exact_gamma - 1.0) < 1e-9);
    CHECK(supermodular_by_enumeration(in.scenario, in.sol));
}

TEST_CASE("single sensor gives a ratio of one") {
    const Instance in(fixtures::scalar_one_sensor());
    const RatioReport r = exact_supermodularity_ratio(in.obj);
    CHECK(*r.exact_gamma == 1.0);
    REQUIRE(r.witness);
    CHECK(r.witness->A.empty());
    CHECK(r.witness->B.empty());
}

TEST_CASE("spectral bound on the scalar one-sensor instance") {
    // 1 * (0.5^2 / 1^2) * (1 + 0.5) / (2 + 1)
    const Instance in(fixtures::scalar_one_sensor());
    const RatioReport r = ratio_lower_bound(in.obj);
    CHECK(r.theta_sum_pd);
    CHECK(r.unit_trace_sensors);
    CHECK(r.trace_condition);
    CHECK(r.bound_applicable());
    REQUIRE(r.lower_bound);
    CHECK(std::abs(*r.lower_bound - 0.125) < 1e-9);
    CHECK_FALSE(r.exact_gamma.has_value());
}

TEST_CASE("bound flags") {
    Scenario zero_q = fixtures::scalar_one_sensor();
    zero_q.weights.Q[0] = fixtures::scalar(0.0);
    CHECK_FALSE(ratio_lower_bound(Instance(zero_q).obj).theta_sum_pd);

    // Sensor b has whitened trace 2.
    const RatioReport two = ratio_lower_bound(Instance(fixtures::scalar_two_sensor()).obj);
    CHECK_FALSE(two.unit_trace_sensors);
    CHECK_FALSE(two.bound_applicable());
    CHECK(two.lower_bound.has_value());

    // A 2x2 prior with equal eigenvalues 1/2: trace 1 > 1/4.
    Scenario flat = fixtures::scalar_one_sensor();
    flat.system.state_dim = 2;
    flat.system.A = {Matrix::Identity(2, 2)};
    flat.system.B = {Matrix::Identity(2, 2)};
    flat.system.W = {Matrix::Zero(2, 2)};
    flat.system.sigma_init = 0.5 * Matrix::Identity(2, 2);
    flat.system.x1_mean = Vector::Zero(2);
    flat.weights.Q = {Matrix::Identity(2, 2)};
    flat.weights.R = {Matrix::Identity(2, 2)};
    flat.suite.sensors[0].C = {Matrix{{1.0, 0.0}}};
    CHECK_FALSE(ratio_lower_bound(Instance(flat).obj).trace_condition);
}

TEST_CASE("exact ratio matches plain enumeration") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const Instance in(build_random_scenario(fixtures::small_options(1 + seed % 3, 1 + seed % 3, 2 + seed % 4), seed));
        const RatioReport r = exact_supermodularity_ratio(in.obj, 8, 2);
        const double ref = brute_force_gamma(in.scenario, in.sol);
        CHECK(std::abs(*r.exact_gamma - ref) < 1e-12);
        CHECK(*r.exact_gamma >= 0.0);
        CHECK(*r.exact_gamma <= 1.0);
        if (r.witness && r.witness->denominator > 0.0 && r.witness->numerator >= 1e-12)
            CHECK(std::abs(r.witness->numerator / r.witness->denominator - *r.exact_gamma) < 1e-12);
    }
}

TEST_CASE("exact ratio is one exactly when supermodular") {
    for (std::uint64_t seed = 20; seed < 30; ++seed) {
        const Instance in(build_random_scenario(fixtures::small_options(2, 2, 4), seed));
        const double gamma = *exact_supermodularity_ratio(in.obj).exact_gamma;
        CHECK((gamma >= 1.0 - 1e-9) == supermodular_by_enumeration(in.scenario, in.sol));
    }
}

TEST_CASE("exact ratio refuses large ground sets") {
    const Instance in(build_random_scenario(fixtures::small_options(2, 1, 9), 3));
    CHECK_THROWS_AS((void)exact_supermodularity_ratio(in.obj), ValidationError);
    CHECK_NOTHROW((void)exact_supermodularity_ratio(in.obj, 9));
    const RatioReport r = supermodularity_report(in.obj);
    CHECK_FALSE(r.exact_gamma.has_value());
    CHECK(r.lower_bound.has_value());
}

TEST_CASE("spectral bound never exceeds the exact ratio when applicable") {
    int applicable = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const Instance in(fixtures::bound_ready_instance(2 + static_cast<int>(seed % 2), 2, 4, seed));
        const RatioReport r = supermodularity_report(in.obj);
        CHECK(r.unit_trace_sensors);
        if (!r.bound_applicable())
            continue;
        ++applicable;
        CHECK(*r.lower_bound <= *r.exact_gamma + 1e-9);
        CHECK(*r.lower_bound > 0.0);
    }
    CHECK(applicable >= 20);
}

TEST_CASE("budget certificate closed forms") {
    SelectionReport rep;
    rep.budget = 2.0;
    rep.cost = 2.0;
    rep.lqg_cost_g = 0.5;
    const Certificate zero = budget_certificate(rep, 0.0, 1.0, 0.0);
    CHECK(*zero.rhs == 0.0);
    CHECK(*zero.pass);
    const Certificate one = budget_certificate(rep, 1.0, 1.0, 0.0);
    CHECK(std::abs(*one.rhs - (1.0 - std::exp(-1.0))) < 1e-12);
    CHECK(std::abs(*one.lhs - 0.5) < 1e-12);
    CHECK_FALSE(*one.pass);

    rep.cost = 1.0;  // 1 - e^-0.5 = 0.393 beats the curvature term 0.316
    const Certificate half = budget_certificate(rep, 1.0, 1.0, 0.0);
    CHECK(std::abs(*half.rhs - (1.0 - std::exp(-0.5))) < 1e-12);

    const Certificate degenerate = budget_certificate(rep, 1.0, 1.0, 1.0);
    CHECK(*degenerate.lhs == 1.0);
    CHECK(*degenerate.pass);

    const Certificate missing = budget_certificate(rep, 1.0, 1.0, std::nullopt);
    CHECK_FALSE(missing.lhs.has_value());
    CHECK_FALSE(missing.pass.has_value());
}

TEST_CASE("budget certificate on the scalar instance") {
    const Instance in(fixtures::scalar_two_sensor());
    const SelectionReport greedy = greedy_budget(in.obj, 2.0);
    const SelectionReport best = oracle_budget(in.obj, 2.0);
    const Certificate c = budget_certificate(greedy, 1.0, in.obj.g({}), best.lqg_cost_g);
    CHECK(std::abs(*c.lhs - 1.0) < 1e-9);
    CHECK(*c.pass);
}

TEST_CASE("minimum-cost certificate on the scalar instance") {
    // kappa_bar 0.2 is kappa 0.7: rhs = 2 + log[(1 - 0.7) / (0.75 - 0.7)] * 2.
    const Instance in(fixtures::scalar_two_sensor());
    const SelectionReport greedy = greedy_mincost(in.obj, 0.7);
    REQUIRE(greedy.chosen == SensorSet{0, 1});
    const SelectionReport best = oracle_mincost(in.obj, 0.7);
    CHECK(best.cost == 2.0);
    const Certificate c = mincost_certificate(greedy, 1.0, in.obj.g({}), 0.7, best.cost);
    CHECK(std::abs(*c.rhs - (2.0 + 2.0 * std::log(6.0))) < 1e-9);
    CHECK(*c.lhs == 3.0);
    CHECK(*c.pass);
    CHECK(*c.within_kappa);

    const Certificate undefined = mincost_certificate(greedy, 0.0, in.obj.g({}), 0.7, best.cost);
    CHECK_FALSE(undefined.pass.has_value());
    CHECK_FALSE(undefined.note.empty());
}

TEST_CASE("minimum-cost certificate with an empty selection passes") {
    const Instance in(fixtures::scalar_two_sensor());
    const SelectionReport greedy = greedy_mincost(in.obj, 5.0);
    REQUIRE(greedy.chosen.empty());
    const Certificate c = mincost_certificate(greedy, 0.5, in.obj.g({}), 5.0, 0.0);
    CHECK(*c.pass);
}

TEST_CASE("certificates hold on random instances with the exact ratio") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Instance in(build_random_scenario(fixtures::small_options(1 + seed % 3, 1 + seed % 4, 3 + seed % 4), seed));
        const double gamma = *exact_supermodularity_ratio(in.obj).exact_gamma;
        const double g_empty = in.obj.g({});
        const double total = set_cost(in.scenario.suite, in.scenario.suite.all());
        const double budget = total * (0.2 + 0.1 * static_cast<double>(seed % 6));

        const SelectionReport gb = greedy_budget(in.obj, budget);
        const SelectionReport ob = oracle_budget(in.obj, budget);
        const Certificate cb = budget_certificate(gb, gamma, g_empty, ob.lqg_cost_g);
        CHECK_MESSAGE(*cb.pass, "seed " << seed);

        const double g_all = in.obj.g(in.scenario.suite.all());
        const double kappa = g_all + (g_empty - g_all) * (0.1 + 0.15 * static_cast<double>(seed % 5));
        const SelectionReport gm = greedy_mincost(in.obj, kappa);
        const SelectionReport om = oracle_mincost(in.obj, kappa);
        const Certificate cm = mincost_certificate(gm, gamma, g_empty, kappa, om.cost);
        CHECK(*cm.within_kappa);
        if (gamma > 0.0)
            CHECK_MESSAGE(*cm.pass, "seed " << seed);
    }
}

TEST_CASE("json shapes") {
    const Instance in(fixtures::scalar_one_sensor());
    const nlohmann::json r = ratio_to_json(supermodularity_report(in.obj));
    CHECK(r["exact_gamma"] == 1.0);
    CHECK(r["bound_applicable"] == true);
    CHECK(r["applicability"]["trace_condition"] == true);
    CHECK(r["witness"]["x"] == 0);

    Certificate c;
    c.rhs = 0.5;
    const nlohmann::json j = certificate_to_json(c);
    CHECK(j["lhs"].is_null());
    CHECK(j["rhs"] == 0.5);
    CHECK(j["pass"].is_null());
}

}  // TEST_SUITE
