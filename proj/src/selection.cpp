#include "lqgcd/selection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/random/uniform_int_distribution.hpp>

#include "lqgcd/rng.hpp"

namespace lqgcd {

namespace {

constexpr double kGainTol = 1e-12;
constexpr double kTieTol = 1e-12;

using Evaluator = std::function<std::vector<double>(const std::vector<SensorSet>&)>;

// a > b beyond rounding noise; infinities compare exactly.
bool clearly_greater(double a, double b) {
    if (std::isinf(a) || std::isinf(b))
        return a > b;
    return a - b > kTieTol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool clearly_less(double a, double b) { return clearly_greater(b, a); }

double rate_of(double gain, double cost) {
    if (cost > 0.0)
        return gain / cost;
    return gain > kGainTol ? std::numeric_limits<double>::infinity() : 0.0;
}

// Deterministic argmax over rates listed in ascending id order: a later
// entry wins only when clearly better, so ties go to the smaller id.
std::size_t best_rate(const std::vector<double>& rates) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < rates.size(); ++k) {
        if (clearly_greater(rates[k], rates[best]))
            best = k;
    }
    return best;
}

struct GreedyState {
    SensorSet set;
    double value = 0.0;
    double cost = 0.0;
    std::vector<SensorId> remaining;
    std::vector<GreedyStep> steps;
};

// One greedy step: add the remaining sensor with the largest gain per cost.
void greedy_step(GreedyState& st, const SensorSuite& suite, const Evaluator& eval) {
    std::vector<SensorSet> candidates;
    candidates.reserve(st.remaining.size());
    for (SensorId a : st.remaining)
        candidates.push_back(st.set.with(a));
    const std::vector<double> values = eval(candidates);

    std::vector<double> gains(values.size()), rates(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        gains[k] = st.value - values[k];
        rates[k] = rate_of(gains[k], suite.at(st.remaining[k]).cost);
    }
    const std::size_t k = best_rate(rates);
    const SensorId added = st.remaining[k];
    st.set = candidates[k];
    st.value = values[k];
    st.cost += suite.at(added).cost;
    st.steps.push_back({added, gains[k], rates[k], st.cost});
    st.remaining.erase(st.remaining.begin() + static_cast<std::ptrdiff_t>(k));
}

GreedyState start(const SensingObjective& obj, const Evaluator& eval) {
    GreedyState st;
    st.value = eval({SensorSet{}}).front();
    for (SensorId i = 0; i < obj.ground_size(); ++i)
        st.remaining.push_back(i);
    return st;
}

void finish(SelectionReport& r, const SensingObjective& obj) {
    r.objective_f = obj.f(r.chosen);
    r.lqg_cost_g = r.objective_f + obj.constant();
    r.cost = set_cost(obj.scenario().suite, r.chosen);
}

// Best affordable singleton, then the greedy sweep with the overflow step
// undone, then whichever of the two scores lower under `eval`.
SelectionReport budgeted_greedy(Method method, const SensingObjective& obj, double budget, const Evaluator& eval) {
    const SensorSuite& suite = obj.scenario().suite;
    SelectionReport r;
    r.method = method;
    r.budget = budget;

    std::vector<SensorSet> singles;
    for (const Sensor& s : suite.sensors) {
        if (fits_budget(s.cost, budget))
            singles.push_back(SensorSet{s.id});
    }
    Candidate s1{SensorSet{}, eval({SensorSet{}}).front()};
    if (!singles.empty()) {
        const std::vector<double> values = eval(singles);
        std::size_t best = 0;
        for (std::size_t k = 1; k < values.size(); ++k) {
            if (clearly_less(values[k], values[best]))
                best = k;
        }
        s1 = {singles[best], values[best]};
    }

    GreedyState st = start(obj, eval);
    while (!st.remaining.empty() && fits_budget(st.cost, budget))
        greedy_step(st, suite, eval);
    if (!fits_budget(st.cost, budget)) {
        st.set = st.set.without(st.steps.back().added);
        st.steps.pop_back();
        st.cost = set_cost(suite, st.set);
        st.value = eval({st.set}).front();
    }
    const Candidate s2{st.set, st.value};

    r.best_singleton = s1;
    r.greedy = s2;
    r.iterations = std::move(st.steps);
    if (clearly_less(s1.value, s2.value))
        r.chosen = s1.set;
    else if (clearly_less(s2.value, s1.value))
        r.chosen = s2.set;
    else
        r.chosen = std::min(s1.set, s2.set);
    finish(r, obj);
    return r;
}

Evaluator f_evaluator(const SensingObjective& obj, int threads) {
    return [&obj, threads](const std::vector<SensorSet>& sets) { return obj.f_many(sets, threads); };
}

std::vector<SensorSet> all_subsets(const SensingObjective& obj, std::size_t cap) {
    const std::size_t n = obj.ground_size();
    if (n > cap || n >= 63)
        throw ValidationError("ground set of " + std::to_string(n) + " sensors exceeds the enumeration cap of " +
                              std::to_string(cap));
    std::vector<SensorSet> sets;
    sets.reserve(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
        sets.push_back(SensorSet::from_mask(mask));
    return sets;
}

}  // namespace

std::string_view method_name(Method m) {
    switch (m) {
    case Method::greedy_budget: return "greedy_budget";
    case Method::greedy_mincost: return "greedy_mincost";
    case Method::oracle_budget: return "oracle_budget";
    case Method::oracle_mincost: return "oracle_mincost";
    case Method::logdet: return "logdet";
    case Method::random: return "random";
    case Method::all: return "all";
    }
    return "unknown";
}

InfeasibleError::InfeasibleError(double f_all, double kappa_bar)
    : std::runtime_error("infeasible: f(all sensors) = " + std::to_string(f_all) + " exceeds kappa_bar = " +
                         std::to_string(kappa_bar)),
      f_all_(f_all),
      kappa_bar_(kappa_bar) {}

SelectionReport greedy_budget(const SensingObjective& obj, double budget, const SelectionOptions& opts) {
    return budgeted_greedy(Method::greedy_budget, obj, budget, f_evaluator(obj, opts.threads));
}

SelectionReport baseline_logdet(const SensingObjective& obj, double budget, const SelectionOptions& opts) {
    const int threads = opts.threads;
    return budgeted_greedy(Method::logdet, obj, budget, [&obj, threads](const std::vector<SensorSet>& sets) {
        return obj.logdet_many(sets, threads);
    });
}

SelectionReport greedy_mincost(const SensingObjective& obj, double kappa, const SelectionOptions& opts) {
    const SensorSuite& suite = obj.scenario().suite;
    const double kb = kappa_bar(kappa, obj.scenario(), obj.solution());
    const double f_all = obj.f(suite.all());
    if (f_all > kb)
        throw InfeasibleError(f_all, kb);

    const Evaluator eval = f_evaluator(obj, opts.threads);
    GreedyState st = start(obj, eval);
    while (st.value > kb && !st.remaining.empty())
        greedy_step(st, suite, eval);
    if (st.value > kb)
        throw InfeasibleError(f_all, kb);

    SelectionReport r;
    r.method = Method::greedy_mincost;
    r.kappa = kappa;
    r.kappa_bar = kb;
    r.chosen = st.set;
    if (!st.steps.empty()) {
        r.last_added = st.steps.back().added;
        r.before_last = st.set.without(*r.last_added);
        r.g_before_last = obj.g(*r.before_last);
    }
    r.iterations = std::move(st.steps);
    finish(r, obj);
    return r;
}

SelectionReport oracle_budget(const SensingObjective& obj, double budget, const SelectionOptions& opts) {
    const SensorSuite& suite = obj.scenario().suite;
    std::vector<SensorSet> feasible;
    for (SensorSet& s : all_subsets(obj, opts.oracle_cap)) {
        if (fits_budget(set_cost(suite, s), budget))
            feasible.push_back(std::move(s));
    }
    const std::vector<double> values = obj.f_many(feasible, opts.threads);
    std::size_t best = 0;
    for (std::size_t k = 1; k < feasible.size(); ++k) {
        if (clearly_less(values[k], values[best]) ||
            (!clearly_less(values[best], values[k]) && feasible[k] < feasible[best]))
            best = k;
    }
    SelectionReport r;
    r.method = Method::oracle_budget;
    r.budget = budget;
    r.chosen = feasible[best];
    finish(r, obj);
    return r;
}

SelectionReport oracle_mincost(const SensingObjective& obj, double kappa, const SelectionOptions& opts) {
    const SensorSuite& suite = obj.scenario().suite;
    const double kb = kappa_bar(kappa, obj.scenario(), obj.solution());
    const std::vector<SensorSet> sets = all_subsets(obj, opts.oracle_cap);
    const std::vector<double> values = obj.f_many(sets, opts.threads);

    std::optional<std::size_t> best;
    double best_cost = 0.0;
    for (std::size_t k = 0; k < sets.size(); ++k) {
        if (values[k] > kb)
            continue;
        const double c = set_cost(suite, sets[k]);
        bool better = !best;
        if (best) {
            if (clearly_less(c, best_cost))
                better = true;
            else if (!clearly_less(best_cost, c)) {
                if (clearly_less(values[k], values[*best]))
                    better = true;
                else if (!clearly_less(values[*best], values[k]))
                    better = sets[k] < sets[*best];
            }
        }
        if (better) {
            best = k;
            best_cost = c;
        }
    }
    if (!best)
        throw InfeasibleError(obj.f(suite.all()), kb);

    SelectionReport r;
    r.method = Method::oracle_mincost;
    r.kappa = kappa;
    r.kappa_bar = kb;
    r.chosen = sets[*best];
    finish(r, obj);
    return r;
}

SelectionReport baseline_random(const SensingObjective& obj, double budget, const SensorSet& mandatory,
                                std::uint64_t seed) {
    const SensorSuite& suite = obj.scenario().suite;
    double cost = set_cost(suite, mandatory);
    if (!fits_budget(cost, budget))
        throw ValidationError("mandatory sensors cost " + std::to_string(cost) + ", over the budget of " +
                              std::to_string(budget));

    std::vector<SensorId> rest;
    for (SensorId i = 0; i < suite.size(); ++i) {
        if (!mandatory.contains(i))
            rest.push_back(i);
    }
    // Fisher-Yates with a portable integer distribution.
    SplitMix64 rng(seed);
    for (std::size_t k = rest.size(); k > 1; --k) {
        boost::random::uniform_int_distribution<std::size_t> pick(0, k - 1);
        std::swap(rest[k - 1], rest[pick(rng)]);
    }

    SensorSet chosen = mandatory;
    for (SensorId i : rest) {
        if (fits_budget(cost + suite.at(i).cost, budget)) {
            chosen = chosen.with(i);
            cost += suite.at(i).cost;
        }
    }
    SelectionReport r;
    r.method = Method::random;
    r.budget = budget;
    r.chosen = chosen;
    finish(r, obj);
    return r;
}

SelectionReport select_all(const SensingObjective& obj) {
    SelectionReport r;
    r.method = Method::all;
    r.chosen = obj.scenario().suite.all();
    finish(r, obj);
    return r;
}

double required_budget(const Scenario& scenario) {
    if (!scenario.budget)
        throw ValidationError("budget: required for the budgeted problem");
    return *scenario.budget;
}

double required_kappa(const Scenario& scenario) {
    if (!scenario.kappa)
        throw ValidationError("kappa: required for the minimum-sensing problem");
    return *scenario.kappa;
}

nlohmann::json report_to_json(const SelectionReport& r) {
    using nlohmann::json;
    auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json doc;
    doc["method"] = std::string(method_name(r.method));
    doc["chosen"] = r.chosen.ids();
    doc["objective_f"] = r.objective_f;
    doc["lqg_cost_g"] = r.lqg_cost_g;
    doc["cost"] = r.cost;
    if (r.budget)
        doc["budget"] = *r.budget;
    if (r.kappa)
        doc["kappa"] = *r.kappa;
    if (r.kappa_bar)
        doc["kappa_bar"] = *r.kappa_bar;
    if (r.best_singleton)
        doc["best_singleton"] = {{"set", r.best_singleton->set.ids()}, {"value", r.best_singleton->value}};
    if (r.greedy)
        doc["greedy"] = {{"set", r.greedy->set.ids()}, {"value", r.greedy->value}};
    json steps = json::array();
    for (const GreedyStep& s : r.iterations)
        steps.push_back({{"added", s.added},
                         {"gain", s.gain},
                         {"rate", finite_or_null(s.rate)},
                         {"cumulative_cost", s.cumulative_cost}});
    doc["iterations"] = std::move(steps);
    if (r.last_added)
        doc["last_added"] = *r.last_added;
    if (r.before_last)
        doc["before_last"] = r.before_last->ids();
    if (r.g_before_last)
        doc["g_before_last"] = *r.g_before_last;
    return doc;
}

}  // namespace lqgcd
