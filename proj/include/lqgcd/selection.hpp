#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lqgcd/kalman.hpp"

namespace lqgcd {

enum class Method { greedy_budget, greedy_mincost, oracle_budget, oracle_mincost, logdet, random, all };

[[nodiscard]] std::string_view method_name(Method m);

struct Candidate {
    SensorSet set;
    double value = 0.0;  // objective the selector optimized (f, or logdet for that baseline)
};

struct GreedyStep {
    SensorId added = 0;
    double gain = 0.0;
    double rate = 0.0;  // gain / cost, +inf for free sensors with positive gain
    double cumulative_cost = 0.0;
};

struct SelectionReport {
    Method method = Method::greedy_budget;
    SensorSet chosen;
    double objective_f = 0.0;
    double lqg_cost_g = 0.0;
    double cost = 0.0;
    std::optional<double> budget;
    std::optional<double> kappa;
    std::optional<double> kappa_bar;

    // Budgeted greedy: the best affordable singleton and the greedy sweep.
    std::optional<Candidate> best_singleton;
    std::optional<Candidate> greedy;
    std::vector<GreedyStep> iterations;

    // Minimum-cost greedy: last sensor added and the set just before it.
    std::optional<SensorId> last_added;
    std::optional<SensorSet> before_last;
    std::optional<double> g_before_last;
};

// Raised when even the full ground set misses the cost target.
class InfeasibleError : public std::runtime_error {
  public:
    InfeasibleError(double f_all, double kappa_bar);
    [[nodiscard]] double f_all() const { return f_all_; }
    [[nodiscard]] double kappa_bar() const { return kappa_bar_; }

  private:
    double f_all_;
    double kappa_bar_;
};

struct SelectionOptions {
    int threads = 1;
    std::size_t oracle_cap = 20;
};

[[nodiscard]] SelectionReport greedy_budget(const SensingObjective& obj, double budget,
                                            const SelectionOptions& opts = {});
[[nodiscard]] SelectionReport greedy_mincost(const SensingObjective& obj, double kappa,
                                             const SelectionOptions& opts = {});
[[nodiscard]] SelectionReport oracle_budget(const SensingObjective& obj, double budget,
                                            const SelectionOptions& opts = {});
[[nodiscard]] SelectionReport oracle_mincost(const SensingObjective& obj, double kappa,
                                             const SelectionOptions& opts = {});
[[nodiscard]] SelectionReport baseline_logdet(const SensingObjective& obj, double budget,
                                              const SelectionOptions& opts = {});
[[nodiscard]] SelectionReport baseline_random(const SensingObjective& obj, double budget, const SensorSet& mandatory,
                                              std::uint64_t seed);
[[nodiscard]] SelectionReport select_all(const SensingObjective& obj);

// Budget or kappa from the scenario, or a ValidationError naming the field.
[[nodiscard]] double required_budget(const Scenario& scenario);
[[nodiscard]] double required_kappa(const Scenario& scenario);

[[nodiscard]] nlohmann::json report_to_json(const SelectionReport& report);

}  // namespace lqgcd
