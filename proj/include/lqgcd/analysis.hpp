#pragma once

#include <optional>
#include <string>

#include "lqgcd/selection.hpp"

namespace lqgcd {

// The triple (A, B, x) attaining the exact supermodularity ratio, with
// numerator f(A) - f(A + x) and denominator f(B) - f(B + x).
struct RatioWitness {
    SensorSet A;
    SensorSet B;
    SensorId x = 0;
    double numerator = 0.0;
    double denominator = 0.0;
};

struct RatioReport {
    std::optional<double> exact_gamma;
    std::optional<RatioWitness> witness;
    std::optional<double> lower_bound;
    // Hypotheses of the computable lower bound.
    bool theta_sum_pd = false;
    bool unit_trace_sensors = false;
    bool trace_condition = false;

    [[nodiscard]] bool bound_applicable() const { return theta_sum_pd && unit_trace_sensors && trace_condition; }
};

// min over A ⊆ B ⊆ V, x ∉ B of [f(A) - f(A+x)] / [f(B) - f(B+x)], clamped to
// [0, 1]. Pairs with a vanishing denominator are skipped; a vanishing
// numerator over a positive denominator gives 0. Throws above `cap` sensors.
[[nodiscard]] RatioReport exact_supermodularity_ratio(const SensingObjective& obj, std::size_t cap = 8,
                                                      int threads = 1);

// Spectral lower bound on the ratio plus its three applicability flags.
// The value is computed regardless; it is a valid bound only when
// bound_applicable().
[[nodiscard]] RatioReport ratio_lower_bound(const SensingObjective& obj);

// Both of the above in one report; exact_gamma is absent above `cap`.
[[nodiscard]] RatioReport supermodularity_report(const SensingObjective& obj, std::size_t cap = 8,
                                                 int threads = 1);

struct Certificate {
    std::optional<double> lhs;
    std::optional<double> rhs;
    std::optional<bool> pass;  // absent when the certificate is undefined or lacks an optimum
    std::optional<bool> within_kappa;  // minimum-cost certificate only: g(S) <= kappa
    std::string note;
};

// Approximation guarantee of the budgeted greedy:
//   (g(0) - g(S)) / (g(0) - g*) >= max[gamma/2 (1 - e^-gamma), 1 - e^(-gamma c(S)/b)].
[[nodiscard]] Certificate budget_certificate(const SelectionReport& report, double gamma, double g_empty,
                                             std::optional<double> g_star);

// Cost guarantee of the minimum-cost greedy:
//   c(S) <= c(s_l) + (1/gamma) log[(g(0) - kappa) / (g(S_{l-1}) - kappa)] b*.
[[nodiscard]] Certificate mincost_certificate(const SelectionReport& report, double gamma, double g_empty,
                                              double kappa, std::optional<double> b_star);

[[nodiscard]] nlohmann::json ratio_to_json(const RatioReport& report);
[[nodiscard]] nlohmann::json certificate_to_json(const Certificate& cert);

}  // namespace lqgcd
