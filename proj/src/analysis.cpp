#include "lqgcd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lqgcd {

namespace {

constexpr double kMarginTol = 1e-12;
constexpr double kCertTol = 1e-9;

}  // namespace

RatioReport exact_supermodularity_ratio(const SensingObjective& obj, std::size_t cap, int threads) {
    const std::size_t n = obj.ground_size();
    if (n > cap)
        throw ValidationError("exact ratio needs at most " + std::to_string(cap) + " sensors, got " +
                              std::to_string(n));
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    std::vector<SensorSet> sets;
    for (std::uint64_t m = 0; m <= full; ++m)
        sets.push_back(SensorSet::from_mask(m));
    const std::vector<double> f = obj.f_many(sets, threads);

    RatioReport r;
    double gamma = std::numeric_limits<double>::infinity();
    for (std::uint64_t b = 0; b <= full; ++b) {
        for (std::size_t x = 0; x < n; ++x) {
            const std::uint64_t bit = std::uint64_t{1} << x;
            if (b & bit)
                continue;
            const double den = f[b] - f[b | bit];
            // Walk every submask a of b, including b itself and 0.
            for (std::uint64_t a = b;; a = (a - 1) & b) {
                const double num = f[a] - f[a | bit];
                if (den >= kMarginTol) {
                    const double ratio = num < kMarginTol ? 0.0 : num / den;
                    if (ratio < gamma) {
                        gamma = ratio;
                        r.witness = RatioWitness{sets[a], sets[b], x, num, den};
                    }
                }
                if (a == 0)
                    break;
            }
        }
    }
    r.exact_gamma = r.witness ? std::clamp(gamma, 0.0, 1.0) : 1.0;
    return r;
}

RatioReport ratio_lower_bound(const SensingObjective& obj) {
    RatioReport r;
    const RiccatiSolution& sol = obj.solution();
    const SensorSuite& suite = obj.scenario().suite;
    const CovariancePropagator& prop = obj.propagator();
    const CovarianceTrajectory none = obj.trajectory(SensorSet{});
    const CovarianceTrajectory every = obj.trajectory(suite.all());
    const int T = obj.scenario().horizon();

    const Matrix theta = sol.theta_sum();
    const double th_min = min_eigenvalue(theta);
    const double th_max = max_eigenvalue(theta);
    r.theta_sum_pd = th_min > kPsdTol;

    double post_min = std::numeric_limits<double>::infinity();
    double prior_max = 0.0;
    r.trace_condition = true;
    for (int t = 0; t < T; ++t) {
        const double lmin = min_eigenvalue(every.posterior[t]);
        const double lmax = max_eigenvalue(none.posterior[t]);
        post_min = std::min(post_min, lmin * lmin);
        prior_max = std::max(prior_max, lmax * lmax);
        if (none.posterior[t].trace() > lmax * lmax + kCertTol)
            r.trace_condition = false;
    }

    r.unit_trace_sensors = true;
    double inner_min = std::numeric_limits<double>::infinity();
    double inner_max = 0.0;
    for (SensorId i = 0; i < suite.size(); ++i) {
        for (int t = 0; t < T; ++t) {
            const Matrix& cbar = prop.whitened(i, t);
            if (std::abs((cbar * cbar.transpose()).trace() - 1.0) > kCertTol)
                r.unit_trace_sensors = false;
            const auto k = static_cast<std::size_t>(t);
            inner_min = std::min(inner_min, min_eigenvalue(symmetrize(cbar * every.posterior[k] * cbar.transpose())));
            inner_max = std::max(inner_max, max_eigenvalue(symmetrize(cbar * none.posterior[k] * cbar.transpose())));
        }
    }
    if (suite.size() == 0 || prior_max <= 0.0)
        return r;

    const double spread = th_max > 0.0 ? th_min / th_max : 0.0;
    r.lower_bound = spread * (post_min / prior_max) * (1.0 + inner_min) / (2.0 + inner_max);
    return r;
}

RatioReport supermodularity_report(const SensingObjective& obj, std::size_t cap, int threads) {
    RatioReport r = ratio_lower_bound(obj);
    if (obj.ground_size() <= cap) {
        const RatioReport exact = exact_supermodularity_ratio(obj, cap, threads);
        r.exact_gamma = exact.exact_gamma;
        r.witness = exact.witness;
    }
    return r;
}

Certificate budget_certificate(const SelectionReport& report, double gamma, double g_empty,
                               std::optional<double> g_star) {
    Certificate c;
    const double budget = report.budget.value_or(0.0);
    const double curvature_term = gamma / 2.0 * (1.0 - std::exp(-gamma));
    const double budget_term = budget > 0.0 ? 1.0 - std::exp(-gamma * report.cost / budget) : 0.0;
    c.rhs = std::max(curvature_term, budget_term);
    if (!g_star) {
        c.note = "no optimum supplied";
        return c;
    }
    const double denom = g_empty - *g_star;
    if (std::abs(denom) <= kMarginTol * std::max(1.0, std::abs(g_empty))) {
        c.lhs = 1.0;
        c.note = "empty set already optimal";
    } else {
        c.lhs = (g_empty - report.lqg_cost_g) / denom;
    }
    c.pass = *c.lhs >= *c.rhs - kCertTol;
    return c;
}

Certificate mincost_certificate(const SelectionReport& report, double gamma, double g_empty, double kappa,
                                std::optional<double> b_star) {
    Certificate c;
    c.lhs = report.cost;
    c.within_kappa = report.lqg_cost_g <= kappa + kCertTol * std::max(1.0, std::abs(kappa));
    if (!report.last_added || report.iterations.empty()) {
        c.pass = *c.within_kappa;
        c.note = "empty selection";
        return c;
    }
    if (gamma <= 0.0) {
        c.note = "undefined for a zero supermodularity ratio";
        return c;
    }
    if (!b_star) {
        c.note = "no optimal cost supplied";
        return c;
    }
    const double g_prev = report.g_before_last.value_or(g_empty);
    if (g_prev - kappa <= 0.0 || g_empty - kappa <= 0.0) {
        c.note = "undefined: the set before the last addition already meets kappa";
        return c;
    }
    const auto& steps = report.iterations;
    const double last_cost = steps.back().cumulative_cost - (steps.size() > 1 ? steps[steps.size() - 2].cumulative_cost : 0.0);
    c.rhs = last_cost + std::log((g_empty - kappa) / (g_prev - kappa)) / gamma * *b_star;
    c.pass = report.cost <= *c.rhs + kCertTol && *c.within_kappa;
    return c;
}

nlohmann::json ratio_to_json(const RatioReport& r) {
    using nlohmann::json;
    json doc;
    doc["exact_gamma"] = r.exact_gamma ? json(*r.exact_gamma) : json(nullptr);
    doc["lower_bound"] = r.lower_bound ? json(*r.lower_bound) : json(nullptr);
    doc["bound_applicable"] = r.bound_applicable();
    doc["applicability"] = {{"theta_sum_positive_definite", r.theta_sum_pd},
                            {"unit_trace_sensors", r.unit_trace_sensors},
                            {"trace_condition", r.trace_condition}};
    if (r.witness)
        doc["witness"] = {{"A", r.witness->A.ids()},
                          {"B", r.witness->B.ids()},
                          {"x", r.witness->x},
                          {"numerator", r.witness->numerator},
                          {"denominator", r.witness->denominator}};
    else
        doc["witness"] = nullptr;
    return doc;
}

nlohmann::json certificate_to_json(const Certificate& c) {
    using nlohmann::json;
    json doc;
    doc["lhs"] = c.lhs ? json(*c.lhs) : json(nullptr);
    doc["rhs"] = c.rhs ? json(*c.rhs) : json(nullptr);
    doc["pass"] = c.pass ? json(*c.pass) : json(nullptr);
    if (c.within_kappa)
        doc["within_kappa"] = *c.within_kappa;
    if (!c.note.empty())
        doc["note"] = c.note;
    return doc;
}

}  // namespace lqgcd
