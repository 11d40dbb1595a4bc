// Batch front door: load a model + discount (file, inline spec or named
// preset), run one algorithm, write value/policy/trace CSVs and a run
// manifest.  Exit codes: 0 converged, 1 validation error, 2 iteration cap.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nonlin_mdp/builders.hpp"
#include "nonlin_mdp/discount.hpp"
#include "nonlin_mdp/model.hpp"
#include "nonlin_mdp/model_json.hpp"
#include "nonlin_mdp/oracle.hpp"
#include "nonlin_mdp/random_models.hpp"
#include "nonlin_mdp/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nonlin_mdp;

namespace {

std::string f17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json report_to_json(const PropertyReport& rep) {
    json out = json::array();
    for (const auto& c : rep.checks) {
        json e;
        e["property"] = c.property;
        e["passed"] = c.passed;
        e["informational"] = c.informational;
        e["worst_violation"] = c.worst_violation;
        e["worst_sample"] = c.worst_sample;
        out.push_back(e);
    }
    return out;
}

void write_value_policy_csv(const fs::path& path, const FiniteModel& model,
                            const ValueTable& v, const StationaryPolicy& f) {
    std::ofstream out(path);
    out << "state_index,state_label,value,action_index,action_label\n";
    for (std::size_t x = 0; x < model.num_states(); ++x) {
        const int a = f.size() == model.num_states() ? f[x] : -1;
        out << x << ',' << model.state_labels[x] << ',' << f17(v[x]) << ',' << a << ','
            << (a >= 0 ? model.action_labels[a] : "") << '\n';
    }
}

void write_trace_csv(const fs::path& path, const std::vector<TraceRow>& trace) {
    std::ofstream out(path);
    out << "iter,succ_diff_weighted,apriori_bound,residual\n";
    for (const auto& r : trace)
        out << r.iter << ',' << f17(r.succ_diff_weighted) << ',' << f17(r.apriori_bound) << ','
            << f17(r.residual) << '\n';
}

struct Options {
    std::string model_path;
    std::string preset;
    std::vector<std::string> discounts;
    std::string algorithm = "solve";
    std::string policy_path;
    int horizon = 4;
    double tol = 1e-8;
    int max_iters = 100000;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int parallel = 1;
    bool force = false;
    // preset overrides
    std::optional<double> beta, cost, eps;
    std::optional<int> grid_n, n_states;
};

DiscountFunction resolve_discount(const std::string& src) {
    if (fs::exists(src)) return load_discount(src);
    return parse_discount_spec(src);
}

struct LoadedProblem {
    FiniteModel model;
    DiscountFunction discount;
    json preset_info;
};

LoadedProblem load_problem(const Options& opt) {
    LoadedProblem lp;
    bool discount_from_preset = false;

    if (!opt.preset.empty()) {
        if (opt.preset == "growth1") {
            builders::ShockDistribution shocks{{0.5, 1.5}, {0.5, 0.5}};
            auto built = builders::build_growth1(4.0, opt.grid_n.value_or(9), shocks,
                                                 opt.eps.value_or(0.5));
            lp.model = built.model;
            lp.discount = built.discount;
            lp.preset_info["alpha_formula"] = built.alpha_formula;
            lp.preset_info["alpha_measured"] = built.alpha_measured;
            discount_from_preset = true;
        } else if (opt.preset == "growth2") {
            builders::ShockDistribution shocks{{0.5, 1.5}, {0.5, 0.5}};
            auto built = builders::build_growth2(4.0, opt.grid_n.value_or(9), 0.5, 0.5, 0.5,
                                                 4.0, opt.eps.value_or(0.35), shocks);
            lp.model = built.model;
            lp.discount = built.discount;
            lp.preset_info["alpha_formula"] = built.alpha_formula;
            lp.preset_info["alpha_measured"] = built.alpha_measured;
            discount_from_preset = true;
        } else if (opt.preset == "inventory") {
            builders::ShockDistribution demand{{0, 1, 2, 3}, {0.25, 0.25, 0.25, 0.25}};
            auto built = builders::build_inventory(10.0, opt.grid_n.value_or(11), demand, 1.0,
                                                   {0.0, 0.5, 1.0, 1.5, 2.0}, 4.0);
            lp.model = built.model;
            lp.discount = built.discount;
            discount_from_preset = true;
        } else if (opt.preset == "house-selling") {
            builders::ShockDistribution offers{{1, 2, 3, 4}, {0.25, 0.25, 0.25, 0.25}};
            std::vector<std::vector<double>> q_rows(4, offers.probabilities);
            std::vector<double> R = offers.support;
            std::vector<double> C(4, -opt.cost.value_or(0.0));
            lp.model = builders::build_stopping(offers.support, offers.probabilities, q_rows, R, C);
            lp.discount = make_linear(opt.beta.value_or(0.9));
            discount_from_preset = true;
            lp.preset_info["offers"] = offers.support;
            lp.preset_info["cost"] = opt.cost.value_or(0.0);
        } else if (opt.preset == "chain") {
            auto chain =
                builders::build_chain_counterexample(opt.n_states.value_or(10), opt.beta.value_or(0.5));
            lp.model = chain.model;
            lp.discount = make_linear(opt.beta.value_or(0.5));
            discount_from_preset = true;
        } else {
            throw ParamError("unknown preset: " + opt.preset);
        }
    } else if (!opt.model_path.empty()) {
        lp.model = load_model(opt.model_path);
    } else {
        lp.model = make_random_model(opt.seed);
        lp.preset_info["random_seed"] = opt.seed;
    }

    if (!opt.discounts.empty())
        lp.discount = resolve_discount(opt.discounts.front());
    else if (!discount_from_preset)
        lp.discount = make_linear(0.9);
    return lp;
}

StationaryPolicy load_policy(const std::string& path, const FiniteModel& model) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open policy file: " + path);
    json j = json::parse(in);
    StationaryPolicy f{j.get<std::vector<int>>()};
    check_policy(f, model);
    return f;
}

int run(const Options& opt) {
    fs::path out_dir = opt.out_dir;
    if (const char* env = std::getenv("NONLIN_MDP_OUT")) out_dir = env;
    fs::create_directories(out_dir);
    set_sweep_threads(opt.parallel);

    LoadedProblem lp = load_problem(opt);

    json manifest;
    manifest["config"] = {{"preset", opt.preset},
                          {"model", opt.model_path},
                          {"discounts", opt.discounts},
                          {"algorithm", opt.algorithm},
                          {"tol", opt.tol},
                          {"max_iters", opt.max_iters},
                          {"seed", opt.seed},
                          {"parallel", opt.parallel},
                          {"force", opt.force}};
    if (!lp.preset_info.is_null()) manifest["preset_info"] = lp.preset_info;

    const PropertyReport prop = check_discount(lp.discount);
    manifest["discount"] = {{"name", lp.discount.name},
                            {"kind", lp.discount.kind},
                            {"properties", report_to_json(prop)},
                            {"all_passed", prop.all_passed()}};
    if (!prop.all_passed() && !opt.force) {
        std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << "\n";
        std::cerr << "discount property check failed; rerun with --force to proceed\n";
        return 1;
    }

    const ModelConstants mc = validate_model(lp.model);
    manifest["model_constants"] = {{"b", mc.b}, {"c", mc.c}, {"z", mc.z}, {"alpha", mc.alpha}};
    if (std::isfinite(mc.z)) {
        const GammaIterates gi = gamma_tilde_iterates(lp.discount, mc.alpha, mc.z, 1e-10);
        manifest["gamma_diagnostics"] = {
            {"z", gi.z}, {"L_tilde", gi.L_tilde}, {"k_stop", gi.k_stop}, {"residual", gi.residual}};
    }

    int exit_code = 0;
    const std::string& alg = opt.algorithm;
    if (alg == "check") {
        manifest["status"] = "checked";
    } else if (alg == "solve" || alg == "evaluate" || alg == "howard") {
        SolveReport rep;
        if (alg == "solve") {
            rep = value_iterate(lp.model, lp.discount, opt.tol, opt.max_iters);
        } else if (alg == "evaluate") {
            if (opt.policy_path.empty()) throw ParamError("evaluate requires --policy");
            rep = evaluate_stationary(lp.model, lp.discount,
                                      load_policy(opt.policy_path, lp.model), opt.tol,
                                      opt.max_iters);
        } else {
            StationaryPolicy f0;
            if (!opt.policy_path.empty()) {
                f0 = load_policy(opt.policy_path, lp.model);
            } else {
                for (std::size_t x = 0; x < lp.model.num_states(); ++x)
                    f0.choice.push_back(lp.model.admissible[x].front());
            }
            auto hr = howard_solve(lp.model, lp.discount, f0, opt.tol, opt.max_iters);
            rep = hr.report;
            manifest["howard_outer_iterations"] = hr.policy_seq.size();
        }
        write_value_policy_csv(out_dir / "value.csv", lp.model, rep.value, rep.policy);
        write_value_policy_csv(out_dir / "policy.csv", lp.model, rep.value, rep.policy);
        write_trace_csv(out_dir / "trace.csv", rep.trace);
        manifest["status"] = rep.status == SolveStatus::converged ? "converged" : "iteration_cap";
        manifest["iterations"] = rep.iterations;
        manifest["final_residual"] = rep.final_residual;
        if (rep.status != SolveStatus::converged) exit_code = 2;
    } else if (alg == "finite-horizon") {
        StationaryPolicy f;
        if (!opt.policy_path.empty()) {
            f = load_policy(opt.policy_path, lp.model);
        } else {
            for (std::size_t x = 0; x < lp.model.num_states(); ++x)
                f.choice.push_back(lp.model.admissible[x].front());
        }
        std::vector<StationaryPolicy> seq(opt.horizon, f);
        ValueTable v = evaluate_finite_horizon(lp.model, lp.discount, seq, opt.horizon);
        write_value_policy_csv(out_dir / "value.csv", lp.model, v, f);
        write_value_policy_csv(out_dir / "policy.csv", lp.model, v, f);
        write_trace_csv(out_dir / "trace.csv", {});
        manifest["status"] = "converged";
        manifest["horizon"] = opt.horizon;
    } else if (alg == "policy-sets") {
        auto sets = policy_iteration_sets(lp.model, lp.discount, 200, 1e-9, opt.tol,
                                          opt.max_iters);
        json js = json::array();
        for (std::size_t x = 0; x < sets.limit.size(); ++x) {
            js.push_back({{"state", x},
                          {"limit_set", sets.limit[x]},
                          {"recurring", sets.recurring[x]},
                          {"recurring_in_limit", sets.recurring_in_limit[x]}});
        }
        manifest["maximiser_sets"] = js;
        manifest["status"] = "converged";
        SolveReport rep = value_iterate(lp.model, lp.discount, opt.tol, opt.max_iters);
        write_value_policy_csv(out_dir / "value.csv", lp.model, rep.value, rep.policy);
        write_value_policy_csv(out_dir / "policy.csv", lp.model, rep.value, rep.policy);
        write_trace_csv(out_dir / "trace.csv", rep.trace);
    } else if (alg == "truncate") {
        auto tr = truncation_solve(lp.model, lp.discount, default_K_schedule(), opt.tol,
                                   opt.max_iters);
        write_value_policy_csv(out_dir / "value.csv", lp.model, tr.v_infinity, tr.policy);
        write_value_policy_csv(out_dir / "policy.csv", lp.model, tr.v_infinity, tr.policy);
        std::vector<TraceRow> trace;
        for (std::size_t i = 1; i < tr.per_K_values.size(); ++i) {
            double diff = weighted_diff(tr.per_K_values[i], tr.per_K_values[i - 1], lp.model);
            trace.push_back({static_cast<int>(tr.K_schedule[i]), diff, 0.0, 0.0});
        }
        write_trace_csv(out_dir / "trace.csv", trace);
        manifest["status"] = "converged";
        manifest["K_schedule"] = tr.K_schedule;
        manifest["all_stabilized"] =
            std::all_of(tr.stabilized.begin(), tr.stabilized.end(), [](bool b) { return b; });
    } else if (alg == "house-selling") {
        builders::ShockDistribution offers{{1, 2, 3, 4}, {0.25, 0.25, 0.25, 0.25}};
        auto analysis = builders::solve_house_selling(1.0, 4.0, offers, opt.cost.value_or(0.0),
                                                      lp.discount, opt.tol, opt.max_iters);
        write_value_policy_csv(out_dir / "value.csv", analysis.model, analysis.value, {});
        write_value_policy_csv(out_dir / "policy.csv", analysis.model, analysis.value, {});
        write_trace_csv(out_dir / "trace.csv", {});
        manifest["status"] = "converged";
        manifest["continuation_constant"] = analysis.continuation_constant;
        manifest["threshold"] = analysis.threshold;
        manifest["stop_time_finite"] = analysis.stop_time_finite;
        manifest["stop_region"] = analysis.stop_region;
    } else if (alg == "compare") {
        if (opt.discounts.size() < 2) throw ParamError("compare requires at least two --discount");
        std::vector<DiscountFunction> ds;
        for (const auto& s : opt.discounts) ds.push_back(resolve_discount(s));
        std::vector<SolveReport> reps;
        bool any_cap = false;
        for (const auto& d : ds) {
            reps.push_back(value_iterate(lp.model, d, opt.tol, opt.max_iters));
            any_cap = any_cap || reps.back().status != SolveStatus::converged;
        }
        std::ofstream out(out_dir / "compare.csv");
        out << "state_index,state_label";
        for (const auto& d : ds) out << ',' << d.name;
        out << '\n';
        for (std::size_t x = 0; x < lp.model.num_states(); ++x) {
            out << x << ',' << lp.model.state_labels[x];
            for (const auto& r : reps) out << ',' << f17(r.value[x]);
            out << '\n';
        }
        json pair_diffs = json::array();
        for (std::size_t i = 0; i < ds.size(); ++i)
            for (std::size_t j = i + 1; j < ds.size(); ++j)
                pair_diffs.push_back(
                    {{"a", ds[i].name},
                     {"b", ds[j].name},
                     {"max_weighted_diff",
                      weighted_diff(reps[i].value, reps[j].value, lp.model)}});
        manifest["pairwise_diffs"] = pair_diffs;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (ds[i].kind != "linear") continue;
            auto ref = oracle::classical_discounted_VI(lp.model, ds[i].params.at("beta"), opt.tol);
            manifest["oracle_diff_" + ds[i].name] =
                weighted_diff(reps[i].value, ref.value, lp.model);
        }
        manifest["status"] = any_cap ? "iteration_cap" : "converged";
        if (any_cap) exit_code = 2;
    } else {
        throw ParamError("unknown algorithm: " + alg);
    }

    std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << "\n";
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver toolkit for Markov decision processes with non-linear discounting"};
    Options opt;
    app.add_option("--model", opt.model_path, "model JSON file");
    app.add_option("--preset", opt.preset,
                   "named preset: growth1|growth2|inventory|house-selling|chain");
    app.add_option("--discount", opt.discounts,
                   "discount JSON file or inline spec (e.g. linear:0.9); repeat for compare");
    app.add_option("--algorithm", opt.algorithm,
                   "solve|evaluate|finite-horizon|howard|policy-sets|truncate|house-selling|"
                   "check|compare");
    app.add_option("--policy", opt.policy_path, "policy JSON (array of action indices)");
    app.add_option("--horizon", opt.horizon, "horizon for finite-horizon evaluation");
    app.add_option("--tol", opt.tol, "convergence tolerance");
    app.add_option("--max-iters", opt.max_iters, "iteration cap");
    app.add_option("--out", opt.out_dir, "output directory (NONLIN_MDP_OUT overrides)");
    app.add_option("--seed", opt.seed, "seed for random-model generation");
    app.add_option("--parallel", opt.parallel, "worker threads for state sweeps");
    app.add_flag("--force", opt.force, "proceed despite failing discount properties");
    double beta, cost, eps;
    int grid_n, n_states;
    auto* ob = app.add_option("--beta", beta, "preset override: discount factor");
    auto* oc = app.add_option("--c", cost, "preset override: continuation cost");
    auto* oe = app.add_option("--eps", eps, "preset override: log-blend epsilon");
    auto* og = app.add_option("--grid-n", grid_n, "preset override: grid size");
    auto* on = app.add_option("--n-states", n_states, "preset override: chain length");
    CLI11_PARSE(app, argc, argv);
    if (*ob) opt.beta = beta;
    if (*oc) opt.cost = cost;
    if (*oe) opt.eps = eps;
    if (*og) opt.grid_n = grid_n;
    if (*on) opt.n_states = n_states;

    try {
        return run(opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
