// lqgcd: build scenarios, select sensors, certify and simulate LQG co-designs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lqgcd/analysis.hpp"
#include "lqgcd/results.hpp"
#include "lqgcd/scenario_io.hpp"
#include "lqgcd/scenarios.hpp"
#include "lqgcd/selection.hpp"
#include "lqgcd/simulate.hpp"

using namespace lqgcd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInfeasible = 2;

struct Output {
    std::string path;
    std::string format = "csv";

    void add(CLI::App* cmd, bool tabular = true) {
        cmd->add_option("--out", path, "Output file (default: standard output)");
        if (tabular)
            cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    }

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path);
        if (!out)
            throw ValidationError("cannot write '" + path + "'");
        out << text;
    }

    void rows(const std::vector<ResultRow>& rows) const {
        if (format == "json") {
            write(rows_to_json(rows).dump(1) + "\n");
        } else {
            std::ostringstream os;
            write_csv(os, rows);
            write(os.str());
        }
    }

    void json(const nlohmann::json& doc) const { write(doc.dump(1) + "\n"); }
};

std::string scenario_id_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

SensingObjective objective_for(const Scenario& s) { return SensingObjective(s, solve_riccati(s.system, s.weights)); }

FormationMode parse_formation_mode(const std::string& m) {
    return m == "heterogeneous" ? FormationMode::heterogeneous : FormationMode::homogeneous;
}

CostMode parse_cost_mode(const std::string& m) {
    return m == "heterogeneous" ? CostMode::heterogeneous : CostMode::uniform;
}

// Selection for one (method, problem) pair; `value` is the budget or kappa.
SelectionReport run_method(const std::string& method, bool mincost, const SensingObjective& obj, double value,
                           std::uint64_t seed, const SelectionOptions& opts) {
    if (method == "all")
        return select_all(obj);
    if (mincost) {
        if (method == "greedy")
            return greedy_mincost(obj, value, opts);
        if (method == "oracle")
            return oracle_mincost(obj, value, opts);
        throw ValidationError("--method " + method + " is not available for the minimum-cost problem");
    }
    if (method == "greedy")
        return greedy_budget(obj, value, opts);
    if (method == "oracle")
        return oracle_budget(obj, value, opts);
    if (method == "logdet")
        return baseline_logdet(obj, value, opts);
    if (method == "random")
        return baseline_random(obj, value, obj.scenario().suite.of_kind("gps"), seed);
    throw ValidationError("unknown method '" + method + "'");
}

std::optional<double> exact_gamma_if_small(const SensingObjective& obj, int threads) {
    if (obj.ground_size() > 8)
        return std::nullopt;
    return exact_supermodularity_ratio(obj, 8, threads).exact_gamma;
}

// Greedy rows carry the certificate whenever gamma and the optimum are
// computable exactly.
void attach_certificate(ResultRow& row, const SelectionReport& rep, const SensingObjective& obj, double value,
                        bool mincost, const SelectionOptions& opts) {
    row.gamma_bound = ratio_lower_bound(obj).lower_bound;
    if (rep.method != Method::greedy_budget && rep.method != Method::greedy_mincost)
        return;
    const auto gamma = exact_gamma_if_small(obj, opts.threads);
    if (!gamma)
        return;
    const double g_empty = obj.g(SensorSet{});
    Certificate cert;
    if (mincost)
        cert = mincost_certificate(rep, *gamma, g_empty, value, oracle_mincost(obj, value, opts).cost);
    else
        cert = budget_certificate(rep, *gamma, g_empty, oracle_budget(obj, value, opts).lqg_cost_g);
    if (!cert.pass)
        return;
    row.gamma_exact = gamma;
    row.cert_lhs = cert.lhs;
    row.cert_rhs = cert.rhs;
    row.cert_pass = cert.pass;
}

ResultRow row_from(const std::string& id, const Scenario& s, const SelectionReport& rep, std::optional<double> value) {
    ResultRow row;
    row.scenario_id = id;
    row.method = std::string(method_name(rep.method));
    row.horizon = s.horizon();
    row.budget_or_kappa = value;
    row.selected_set = rep.chosen.to_string();
    row.set_cost = rep.cost;
    row.objective_f = rep.objective_f;
    row.analytical_g = rep.lqg_cost_g;
    return row;
}

double problem_value(const Scenario& s, bool mincost, const std::optional<double>& kappa,
                     const std::optional<double>& budget) {
    if (mincost)
        return kappa ? *kappa : required_kappa(s);
    return budget ? *budget : required_budget(s);
}

std::vector<std::string> expand_methods(const std::string& method, bool mincost) {
    if (method != "every")
        return {method};
    if (mincost)
        return {"greedy", "oracle"};
    return {"greedy", "oracle", "logdet", "random", "all"};
}

// Sweep over freshly built instances: each Monte Carlo run draws a new
// scenario (seed + run) and simulates every method's choice once on it.
struct SweepConfig {
    std::string scenario = "formation";
    std::vector<int> horizons{20};
    std::vector<double> budgets{6};
    std::vector<int> agents{4};
    std::vector<int> landmarks{5};
    std::string mode = "heterogeneous";
    std::vector<std::string> methods{"greedy", "logdet", "random", "all"};
    int runs = 100;
    std::uint64_t seed = 1;
};

std::vector<ResultRow> sweep_rows(const SweepConfig& cfg, const SelectionOptions& opts) {
    const bool formation = cfg.scenario == "formation";
    const bool uav = cfg.scenario == "uav";
    std::vector<ResultRow> rows;

    auto sweep_instance = [&](const std::string& id, auto build, int horizon, double budget) {
        struct Acc {
            std::vector<double> cost, f, g, realized;
            std::string first_set;
            bool failed = false;
        };
        std::vector<Acc> acc(cfg.methods.size());
        for (int r = 0; r < cfg.runs; ++r) {
            const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
            const Scenario s = build(horizon, seed);
            const SensingObjective obj = objective_for(s);
            for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
                if (acc[k].failed)
                    continue;
                SelectionReport rep;
                try {
                    rep = run_method(cfg.methods[k], false, obj, budget, seed, opts);
                } catch (const ValidationError& e) {
                    std::cerr << "warning: " << id << " " << cfg.methods[k] << " skipped: " << e.what() << "\n";
                    acc[k].failed = true;
                    continue;
                }
                if (r == 0)
                    acc[k].first_set = rep.chosen.to_string();
                acc[k].cost.push_back(rep.cost);
                acc[k].f.push_back(rep.objective_f);
                acc[k].g.push_back(rep.lqg_cost_g);
                acc[k].realized.push_back(run_closed_loop(s, obj.solution(), rep.chosen, seed).realized_cost);
            }
        }
        auto mean = [](const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size()); };
        for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
            const Acc& a = acc[k];
            if (a.failed || a.realized.empty())
                continue;
            ResultRow row;
            row.scenario_id = id;
            const std::string& m = cfg.methods[k];
            row.method = m == "greedy" ? "greedy_budget" : m == "oracle" ? "oracle_budget" : m;
            row.horizon = horizon;
            row.budget_or_kappa = budget;
            row.selected_set = a.first_set;
            row.set_cost = mean(a.cost);
            row.objective_f = mean(a.f);
            row.analytical_g = mean(a.g);
            row.empirical_mean = mean(a.realized);
            double ss = 0.0;
            for (double x : a.realized)
                ss += (x - *row.empirical_mean) * (x - *row.empirical_mean);
            const auto count = static_cast<double>(a.realized.size());
            row.empirical_stderr = count > 1 ? std::sqrt(ss / (count - 1) / count) : 0.0;
            row.runs = static_cast<int>(a.realized.size());
            rows.push_back(std::move(row));
        }
    };

    if (formation || uav) {
        const std::vector<int>& sizes = formation ? cfg.agents : cfg.landmarks;
        for (int size : sizes) {
            const std::string id = formation ? "formation-n" + std::to_string(size) + "-" + cfg.mode
                                             : "uav-l" + std::to_string(size) + "-" + cfg.mode;
            auto build = [&, size](int horizon, std::uint64_t seed) {
                return formation ? build_formation_scenario(size, horizon, parse_formation_mode(cfg.mode), seed)
                                 : build_uav_scenario(size, horizon, parse_cost_mode(cfg.mode), seed);
            };
            for (int horizon : cfg.horizons)
                for (double budget : cfg.budgets)
                    sweep_instance(id, build, horizon, budget);
        }
        return rows;
    }

    // A scenario file: fixed instance, Monte Carlo over noise only.
    const Scenario base = load_scenario(cfg.scenario);
    const std::string id = scenario_id_of(cfg.scenario);
    const SensingObjective obj = objective_for(base);
    for (double budget : cfg.budgets) {
        for (const std::string& m : cfg.methods) {
            SelectionReport rep;
            try {
                rep = run_method(m, false, obj, budget, cfg.seed, opts);
            } catch (const ValidationError& e) {
                std::cerr << "warning: " << id << " " << m << " skipped: " << e.what() << "\n";
                continue;
            }
            ResultRow row = row_from(id, base, rep, budget);
            const MonteCarloSummary mc = monte_carlo(base, obj.solution(), rep.chosen, cfg.runs, cfg.seed, opts.threads);
            row.empirical_mean = mc.mean_cost;
            row.empirical_stderr = mc.std_error;
            row.runs = mc.run_count;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sensing-constrained LQG co-design: sensor selection, certificates, and Monte Carlo evaluation"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "Worker threads for set evaluations and Monte Carlo runs")
        ->check(CLI::PositiveNumber);

    // scenario formation|uav
    auto* scen = app.add_subcommand("scenario", "Build an experiment scenario file");
    scen->require_subcommand(1);
    Output scen_out;
    int agents = 4, landmarks = 5, horizon = 20;
    std::string mode = "homogeneous";
    std::uint64_t build_seed = 1;
    double radius = 2.0, landmark_scale = 0.5;
    std::optional<double> build_budget, build_kappa;
    auto* scen_form = scen->add_subcommand("formation", "Planar multi-robot formation");
    auto* scen_uav = scen->add_subcommand("uav", "UAV navigation with GPS, altimeter and landmarks");
    for (auto* c : {scen_form, scen_uav}) {
        c->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
        c->add_option("--mode", mode)->check(CLI::IsMember({"homogeneous", "heterogeneous", "uniform"}));
        c->add_option("--seed", build_seed);
        c->add_option("--budget", build_budget);
        c->add_option("--kappa", build_kappa);
        scen_out.add(c, false);
    }
    scen_form->add_option("--agents", agents)->check(CLI::Range(2, 64));
    scen_form->add_option("--radius", radius, "Formation circumradius [m]");
    scen_uav->add_option("--landmarks", landmarks)->check(CLI::Range(1, 1000));
    scen_uav->add_option("--landmark-scale", landmark_scale, "Scale of the landmark covariance factor");

    // riccati
    auto* ric = app.add_subcommand("riccati", "Solve the backward Riccati recursion");
    std::string scenario_path;
    Output ric_out;
    ric->add_option("--scenario", scenario_path)->required()->check(CLI::ExistingFile);
    ric_out.add(ric, false);

    // select budget|mincost
    auto* sel = app.add_subcommand("select", "Choose a sensor set");
    sel->require_subcommand(1);
    auto* sel_budget = sel->add_subcommand("budget", "Minimize LQG cost under a sensor budget");
    auto* sel_mincost = sel->add_subcommand("mincost", "Minimize sensor cost under an LQG cost target");
    std::string method = "greedy";
    std::optional<double> budget, kappa;
    std::uint64_t seed = 1;
    std::size_t oracle_cap = 20;
    std::string report_path;
    Output sel_out;
    for (auto* c : {sel_budget, sel_mincost}) {
        c->add_option("--scenario", scenario_path)->required()->check(CLI::ExistingFile);
        c->add_option("--seed", seed);
        c->add_option("--oracle-cap", oracle_cap);
        c->add_option("--report", report_path, "Also write the detailed selection report as JSON");
        sel_out.add(c);
    }
    sel_budget->add_option("--budget", budget);
    sel_budget->add_option("--method", method)
        ->check(CLI::IsMember({"greedy", "oracle", "logdet", "random", "all", "every"}));
    sel_mincost->add_option("--kappa", kappa);
    sel_mincost->add_option("--method", method)->check(CLI::IsMember({"greedy", "oracle", "all", "every"}));

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo closed-loop simulation");
    std::string set_text;
    int runs = 100;
    Output sim_out;
    sim->add_option("--scenario", scenario_path)->required()->check(CLI::ExistingFile);
    auto* set_opt = sim->add_option("--set", set_text, "Sensor ids, e.g. \"0;2;5\"");
    sim->add_option("--method", method)
        ->check(CLI::IsMember({"greedy", "oracle", "logdet", "random", "all"}))
        ->excludes(set_opt);
    sim->add_option("--budget", budget);
    sim->add_option("--runs", runs)->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed);
    sim_out.add(sim);

    // ratio
    auto* rat = app.add_subcommand("ratio", "Supermodularity ratio and its computable lower bound");
    std::size_t ratio_cap = 8;
    Output rat_out;
    rat->add_option("--scenario", scenario_path)->required()->check(CLI::ExistingFile);
    rat->add_option("--cap", ratio_cap, "Largest ground set for the exact ratio");
    rat_out.add(rat, false);

    // bound budget|mincost
    auto* bnd = app.add_subcommand("bound", "Evaluate the greedy performance certificate");
    bnd->require_subcommand(1);
    auto* bnd_budget = bnd->add_subcommand("budget", "Certificate for the budgeted greedy");
    auto* bnd_mincost = bnd->add_subcommand("mincost", "Certificate for the minimum-cost greedy");
    std::optional<double> gamma_override;
    Output bnd_out;
    for (auto* c : {bnd_budget, bnd_mincost}) {
        c->add_option("--scenario", scenario_path)->required()->check(CLI::ExistingFile);
        c->add_option("--gamma", gamma_override, "Use this ratio instead of computing it")->check(CLI::Range(0.0, 1.0));
        c->add_option("--oracle-cap", oracle_cap);
        bnd_out.add(c, false);
    }
    bnd_budget->add_option("--budget", budget);
    bnd_mincost->add_option("--kappa", kappa);

    // cost
    auto* cst = app.add_subcommand("cost", "Evaluate f(S), g(S) and the logdet objective for one set");
    Output cst_out;
    cst->add_option("--scenario", scenario_path)->required()->check(CLI::ExistingFile);
    cst->add_option("--set", set_text)->required();
    cst_out.add(cst, false);

    // sweep
    auto* swp = app.add_subcommand("sweep", "Grid of experiments over horizon, budget and size");
    SweepConfig sweep;
    Output swp_out;
    swp->add_option("--scenario", sweep.scenario, "formation, uav, or a scenario file");
    swp->add_option("--horizon,--horizons", sweep.horizons)->delimiter(',');
    swp->add_option("--budgets", sweep.budgets)->delimiter(',');
    swp->add_option("--agents", sweep.agents)->delimiter(',');
    swp->add_option("--landmarks", sweep.landmarks)->delimiter(',');
    swp->add_option("--mode", sweep.mode)->check(CLI::IsMember({"homogeneous", "heterogeneous", "uniform"}));
    swp->add_option("--methods", sweep.methods)
        ->delimiter(',')
        ->check(CLI::IsMember({"greedy", "oracle", "logdet", "random", "all"}));
    swp->add_option("--runs", sweep.runs)->check(CLI::PositiveNumber);
    swp->add_option("--seed", sweep.seed);
    swp_out.add(swp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    const SelectionOptions opts{threads, oracle_cap};
    try {
        if (scen->parsed()) {
            Scenario s;
            if (scen_form->parsed()) {
                s = build_formation_scenario(agents, horizon, parse_formation_mode(mode), build_seed, radius);
            } else {
                s = build_uav_scenario(landmarks, horizon, parse_cost_mode(mode), build_seed, landmark_scale);
            }
            s.budget = build_budget;
            s.kappa = build_kappa;
            validate(s);
            scen_out.write(dump_scenario(s));
        } else if (ric->parsed()) {
            const Scenario s = load_scenario(scenario_path);
            ric_out.json(riccati_to_json(solve_riccati(s.system, s.weights)));
        } else if (sel->parsed()) {
            const bool mincost = sel_mincost->parsed();
            Scenario s = load_scenario(scenario_path);
            const double value = problem_value(s, mincost, kappa, budget);
            const SensingObjective obj = objective_for(s);
            std::vector<ResultRow> rows;
            nlohmann::json reports = nlohmann::json::array();
            for (const std::string& m : expand_methods(method, mincost)) {
                const SelectionReport rep = run_method(m, mincost, obj, value, seed, opts);
                ResultRow row = row_from(scenario_id_of(scenario_path), s, rep, value);
                attach_certificate(row, rep, obj, value, mincost, opts);
                rows.push_back(std::move(row));
                reports.push_back(report_to_json(rep));
            }
            if (!report_path.empty())
                Output{report_path, "json"}.json(reports);
            sel_out.rows(rows);
        } else if (sim->parsed()) {
            const Scenario s = load_scenario(scenario_path);
            const SensingObjective obj = objective_for(s);
            SelectionReport rep;
            if (*set_opt) {
                rep.chosen = SensorSet::parse(set_text);
                rep.method = Method::all;
                rep.cost = set_cost(s.suite, rep.chosen);
                rep.objective_f = obj.f(rep.chosen);
                rep.lqg_cost_g = obj.g(rep.chosen);
            } else {
                const double b = method == "all" ? 0.0 : problem_value(s, false, kappa, budget);
                rep = run_method(method, false, obj, b, seed, opts);
            }
            ResultRow row = row_from(scenario_id_of(scenario_path), s, rep, budget ? budget : s.budget);
            if (*set_opt)
                row.method = "fixed";
            const MonteCarloSummary mc = monte_carlo(s, obj.solution(), rep.chosen, runs, seed, threads);
            row.empirical_mean = mc.mean_cost;
            row.empirical_stderr = mc.std_error;
            row.runs = mc.run_count;
            sim_out.rows({row});
        } else if (rat->parsed()) {
            const Scenario s = load_scenario(scenario_path);
            rat_out.json(ratio_to_json(supermodularity_report(objective_for(s), ratio_cap, threads)));
        } else if (bnd->parsed()) {
            const bool mincost = bnd_mincost->parsed();
            const Scenario s = load_scenario(scenario_path);
            const double value = problem_value(s, mincost, kappa, budget);
            const SensingObjective obj = objective_for(s);
            std::optional<double> gamma = gamma_override;
            std::string gamma_source = "given";
            if (!gamma) {
                gamma = exact_gamma_if_small(obj, threads);
                gamma_source = "exact";
            }
            if (!gamma) {
                const RatioReport lb = ratio_lower_bound(obj);
                if (!lb.lower_bound || !lb.bound_applicable())
                    throw ValidationError("ground set too large for the exact ratio and the lower bound does not "
                                          "apply; pass --gamma");
                gamma = lb.lower_bound;
                gamma_source = "lower_bound";
            }
            const bool small = obj.ground_size() <= oracle_cap;
            const double g_empty = obj.g(SensorSet{});
            nlohmann::json doc;
            if (mincost) {
                const SelectionReport rep = greedy_mincost(obj, value, opts);
                std::optional<double> b_star;
                if (small)
                    b_star = oracle_mincost(obj, value, opts).cost;
                doc = certificate_to_json(mincost_certificate(rep, *gamma, g_empty, value, b_star));
                doc["selection"] = report_to_json(rep);
                doc["optimal_cost"] = b_star ? nlohmann::json(*b_star) : nlohmann::json(nullptr);
            } else {
                const SelectionReport rep = greedy_budget(obj, value, opts);
                std::optional<double> g_star;
                if (small)
                    g_star = oracle_budget(obj, value, opts).lqg_cost_g;
                doc = certificate_to_json(budget_certificate(rep, *gamma, g_empty, g_star));
                doc["selection"] = report_to_json(rep);
                doc["optimal_g"] = g_star ? nlohmann::json(*g_star) : nlohmann::json(nullptr);
            }
            doc["gamma"] = *gamma;
            doc["gamma_source"] = gamma_source;
            doc["g_empty"] = g_empty;
            bnd_out.json(doc);
        } else if (cst->parsed()) {
            const Scenario s = load_scenario(scenario_path);
            const SensingObjective obj = objective_for(s);
            const SensorSet set = SensorSet::parse(set_text);
            nlohmann::json doc;
            doc["set"] = set.ids();
            doc["cost"] = set_cost(s.suite, set);
            doc["f"] = obj.f(set);
            doc["g"] = obj.g(set);
            doc["constant"] = obj.constant();
            try {
                doc["logdet"] = obj.logdet(set);
            } catch (const NumericalError&) {
                doc["logdet"] = nullptr;
            }
            if (s.kappa)
                doc["kappa_bar"] = kappa_bar(s, obj.solution());
            cst_out.json(doc);
        } else if (swp->parsed()) {
            swp_out.rows(sweep_rows(sweep, opts));
        }
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitOk;
}
