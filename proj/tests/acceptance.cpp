// Acceptance gate: one pass/fail line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nonlin_mdp/builders.hpp"
#include "nonlin_mdp/discount.hpp"
#include "nonlin_mdp/model.hpp"
#include "nonlin_mdp/oracle.hpp"
#include "nonlin_mdp/random_models.hpp"
#include "nonlin_mdp/solver.hpp"

using namespace nonlin_mdp;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("%-42s %s%s%s\n", name.c_str(), ok ? "PASS" : "FAIL",
                detail.empty() ? "" : "  -- ", detail.c_str());
    if (!ok) ++failures;
}

std::vector<DiscountFunction> catalog() {
    return {make_linear(0.5), make_linear(0.9), make_sign_effect(0.5, 0.9),
            make_log_blend(0.5, LogBlendVariant::one), make_log_blend(0.35, LogBlendVariant::two)};
}

// 1. linear-discount solves match the classical reference on 50 random models
void linear_coincidence() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        RandomModelOptions o;
        o.n_states = 2 + static_cast<int>(i % 19);  // up to 20
        o.n_actions = 1 + static_cast<int>(i % 5);  // up to 5
        auto m = make_random_model(10000 + i, o);
        const double beta = (i % 2 == 0) ? 0.5 : 0.9;
        auto rep = value_iterate(m, make_linear(beta), 1e-10, 1000000);
        auto ref = oracle::classical_discounted_VI(m, beta, 1e-10);
        worst = std::max(worst, weighted_diff(rep.value, ref.value, m));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max diff %.3g, %.1fs", worst, secs);
    report("linear-coincidence", worst <= 1e-8 && secs < 30.0, buf);
}

// 2. finite-horizon solver values equal the history-tree oracle; the
//    path-aggregated total coincides only for linear discounting
void finite_horizon_oracle() {
    double worst = 0.0, worst_linear_gap = 0.0, best_nonlinear_gap = 0.0;
    for (const auto& d : catalog()) {
        for (std::uint64_t s = 0; s < 3; ++s) {
            RandomModelOptions o;
            o.n_states = 2 + static_cast<int>(s);
            o.n_actions = 2;
            auto m = make_random_model(20000 + s, o);
            for (int n = 1; n <= 4; ++n) {
                std::vector<StationaryPolicy> seq;
                for (int k = 0; k < n; ++k)
                    seq.push_back(make_random_policy(300 + 10 * s + k, m));
                auto w = evaluate_finite_horizon(m, d, seq, n);
                auto hp = oracle::HistoryPolicy::from_markov_seq(seq);
                for (int x0 = 0; x0 < o.n_states; ++x0) {
                    const double un = oracle::enumerate_histories_Un(m, d, hp, n, x0);
                    worst = std::max(worst, std::abs(un - w[x0]));
                    const double rn = oracle::pathwise_Rn(m, d, hp, n, x0);
                    if (d.kind == "linear")
                        worst_linear_gap = std::max(worst_linear_gap, std::abs(rn - un));
                    else
                        best_nonlinear_gap = std::max(best_nonlinear_gap, std::abs(rn - un));
                }
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "oracle diff %.3g, linear gap %.3g, nonlinear gap %.3g",
                  worst, worst_linear_gap, best_nonlinear_gap);
    report("finite-horizon-oracle",
           worst <= 1e-12 && worst_linear_gap <= 1e-12 && best_nonlinear_gap > 1e-6, buf);
}

// 3. one Bellman sweep contracts differences through the drift-adjusted modulus
void contraction_certificate() {
    double worst = -1e300;
    for (const auto& d : catalog()) {
        auto m = make_random_model(30001, {6, 3, -1.0, 1.0, false});
        const auto mc = validate_model(m);
        const double lo = d.modulus_domain_min > neg_inf ? 0.0 : -3.0;
        for (std::uint64_t t = 0; t < 100; ++t) {
            auto v1 = make_random_values(40000 + t, 6, lo, 3.0);
            auto v2 = make_random_values(50000 + t, 6, lo, 3.0);
            auto tv1 = bellman_T(m, d, v1).first;
            auto tv2 = bellman_T(m, d, v2).first;
            worst = std::max(worst, weighted_diff(tv1, tv2, m) -
                                        gamma_tilde(d, mc.alpha, weighted_diff(v1, v2, m)));
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst slack %.3g", worst);
    report("contraction-certificate", worst <= 1e-10, buf);
}

// 4. nested-sum iterates increase, obey the increment majorant, and hit
//    the geometric closed form for linear moduli
void iterate_machinery() {
    bool ok = true;
    std::string detail;
    for (const auto& d : catalog()) {
        for (double z : {0.1, 1.0, 10.0}) {
            auto it = gamma_tilde_iterates(d, 1.0, z, 1e-11);
            if (!std::isfinite(it.L_tilde)) ok = false;
            for (std::size_t k = 1; k < it.sequence.size(); ++k) {
                const double inc = it.sequence[k] - it.sequence[k - 1];
                if (!(inc > 0.0)) ok = false;
                if (inc > gamma_tilde_power(d, 1.0, z, static_cast<int>(k)) + 1e-12) ok = false;
            }
            if (d.kind == "linear") {
                const double beta = d.params.at("beta");
                const double err = std::abs(it.L_tilde - z / (1.0 - beta));
                if (err > 1e-10) {
                    ok = false;
                    detail = "closed-form err " + std::to_string(err);
                }
            }
        }
    }
    report("iterate-machinery", ok, detail);
}

// 5. policy improvement from random starts agrees with value iteration
void cross_algorithm_agreement() {
    double worst = 0.0;
    bool monotone = true;
    for (const auto& d : catalog()) {
        for (std::uint64_t i = 0; i < 20; ++i) {
            auto m = make_random_model(60000 + i, {6, 3, -1.0, 1.0, false});
            auto vi = value_iterate(m, d, 1e-11, 1000000);
            auto hr = howard_solve(m, d, make_random_policy(70000 + i, m), 1e-11, 500);
            worst = std::max(worst, weighted_diff(vi.value, hr.report.value, m));
            for (std::size_t k = 1; k < hr.policy_values.size(); ++k) {
                bool any_strict = false;
                for (std::size_t x = 0; x < m.num_states(); ++x) {
                    if (hr.policy_values[k][x] < hr.policy_values[k - 1][x] - 1e-10)
                        monotone = false;
                    if (hr.policy_values[k][x] > hr.policy_values[k - 1][x] + 1e-10)
                        any_strict = true;
                }
                if (!any_strict) monotone = false; // an outer step must improve somewhere
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max VI/Howard diff %.3g", worst);
    report("cross-algorithm-agreement", worst <= 1e-7 && monotone, buf);
}

// 6. recurring argmax actions along the value-iteration path lie in the
//    optimal argmax set
void policy_iteration_set_inclusion() {
    bool ok = true;
    for (std::uint64_t i = 0; i < 20; ++i) {
        auto m = make_random_model(80000 + i, {5, 3, -1.0, 1.0, false});
        auto ms = policy_iteration_sets(m, make_linear(0.9), 200, 1e-9);
        for (std::size_t x = 0; x < m.num_states(); ++x) {
            if (ms.limit[x].empty()) ok = false;
            if (!ms.recurring_in_limit[x]) ok = false;
            for (int a : ms.recurring[x])
                if (std::find(ms.limit[x].begin(), ms.limit[x].end(), a) == ms.limit[x].end())
                    ok = false;
        }
    }
    report("policy-set-inclusion", ok);
}

// 7. clamped-utility values decrease monotonically in the clamp level; the
//    zero-utility chain collapses to zero while a whole geometric family
//    still solves its interior Bellman equations
void truncation_criterion() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t i = 0; i < 10; ++i) {
        auto m = make_random_model(90000 + i, {5, 2, -4.0, 1.0, false});
        if (i % 2 == 0) m.utility[0][0] = neg_inf;
        m.mode = Mode::unbounded_below;
        try {
            auto tr = truncation_solve(m, make_linear(0.8), default_K_schedule(), 1e-11, 1000000);
            if (!tr.monotone) ok = false;
        } catch (const Error& e) {
            ok = false;
            detail = e.what();
        }
    }
    auto chain = builders::build_chain_counterexample(10, 0.5);
    auto cm = chain.model;
    cm.mode = Mode::unbounded_below;
    auto tr = truncation_solve(cm, make_linear(0.5), default_K_schedule(), 1e-11, 1000000);
    for (std::size_t x = 0; x < cm.num_states(); ++x)
        if (std::abs(tr.v_infinity[x]) > 1e-9) ok = false;
    for (double r : {0.5, 1.0, 2.0}) {
        auto fam = chain.family(r);
        StationaryPolicy f{std::vector<int>(10, 0)};
        auto pv = policy_T(chain.model, make_linear(0.5), f, fam);
        for (std::size_t x = 0; x + 2 < 10; ++x)
            if (std::abs(pv[x] - fam[x]) > 1e-10) ok = false;
    }
    report("truncation-monotone-and-chain", ok, detail);
}

// 8. offer-acceptance threshold matches the classical fixed point and is
//    monotone in the discount, with an up-set stopping region
void house_selling_criterion() {
    bool ok = true;
    builders::ShockDistribution offers{{1, 2, 3, 4}, {0.25, 0.25, 0.25, 0.25}};
    auto an = builders::solve_house_selling(1, 4, offers, 0.0, make_linear(0.9), 1e-12);
    const double c_star = 1.575 / 0.55; // beta*E max(offer, c*) solved by hand
    if (std::abs(an.threshold - c_star) > 1e-8) ok = false;

    auto lo = builders::solve_house_selling(1, 4, offers, 0.0, make_linear(0.5), 1e-11);
    if (!(lo.continuation_constant <= an.continuation_constant + 1e-12)) ok = false;
    if (!(lo.threshold <= an.threshold + 1e-12)) ok = false;
    auto se1 = builders::solve_house_selling(1, 4, offers, 0.0, make_sign_effect(0.3, 0.5), 1e-11);
    auto se2 = builders::solve_house_selling(1, 4, offers, 0.0, make_sign_effect(0.3, 0.8), 1e-11);
    if (!(se1.threshold <= se2.threshold + 1e-12)) ok = false;

    for (const auto& analysis : {an, lo, se1, se2}) {
        bool seen = false;
        for (bool s : analysis.stop_region) {
            if (seen && !s) ok = false;
            seen = seen || s;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "threshold err %.3g", std::abs(an.threshold - c_star));
    report("house-selling-threshold", ok, buf);
}

// 9. application presets converge and the second growth builder reproduces
//    its closed-form weight drift
void preset_criterion() {
    bool ok = true;
    std::string detail;
    builders::ShockDistribution shocks{{0.5, 1.5}, {0.5, 0.5}};
    try {
        auto g1 = builders::build_growth1(4.0, 9, shocks, 0.5);
        auto r1 = value_iterate(g1.model, g1.discount, 1e-9, 1000000);
        if (r1.status != SolveStatus::converged || r1.final_residual > 1e-8) ok = false;

        auto g2 = builders::build_growth2(4.0, 9, 0.5, 0.5, 0.5, 4.0, 0.35, shocks);
        auto r2 = value_iterate(g2.model, g2.discount, 1e-9, 1000000);
        if (r2.status != SolveStatus::converged || r2.final_residual > 1e-8) ok = false;
        if (std::abs(g2.alpha_formula - std::sqrt(2.0)) > 1e-12) ok = false;
        bool rejected = false;
        try {
            builders::build_growth2(4.0, 9, 0.5, 0.5, 0.5, 4.0, 0.25, shocks);
        } catch (const ParamError&) {
            rejected = true;
        }
        if (!rejected) ok = false;

        builders::ShockDistribution demand{{0, 1, 2, 3}, {0.25, 0.25, 0.25, 0.25}};
        auto inv = builders::build_inventory(10.0, 11, demand, 1.0, {0.0, 0.5, 1.0, 1.5, 2.0}, 4.0);
        auto r3 = value_iterate(inv.model, inv.discount, 1e-9, 1000000);
        if (r3.status != SolveStatus::converged || r3.final_residual > 1e-8) ok = false;
    } catch (const Error& e) {
        ok = false;
        detail = e.what();
    }
    report("application-presets", ok, detail);
}

// 10. repeated CLI runs with identical config produce byte-identical CSVs
std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void determinism_criterion(const std::string& cli) {
    bool ok = true;
    std::string detail;
    const fs::path base = fs::temp_directory_path() / "nonlin_mdp_acceptance";
    fs::remove_all(base);
    const std::vector<std::string> scenarios = {
        "--preset inventory --algorithm solve --tol 1e-9",
        "--preset growth1 --algorithm solve --tol 1e-9",
        "--preset chain --algorithm truncate",
        "--seed 7 --discount sign_effect:0.5,0.9 --algorithm solve --tol 1e-10",
    };
    for (std::size_t i = 0; i < scenarios.size() && ok; ++i) {
        const fs::path a = base / ("a" + std::to_string(i)), b = base / ("b" + std::to_string(i));
        fs::create_directories(a);
        fs::create_directories(b);
        for (const fs::path& dir : {a, b}) {
            const std::string cmd =
                cli + " " + scenarios[i] + " --out " + dir.string() + " >/dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) {
                ok = false;
                detail = "scenario exit nonzero: " + scenarios[i];
            }
        }
        for (const char* f : {"value.csv", "policy.csv", "trace.csv"})
            if (slurp(a / f) != slurp(b / f)) {
                ok = false;
                detail = std::string(f) + " differs: " + scenarios[i];
            }
    }
    report("determinism", ok, detail);
}

} // namespace

int main(int argc, char** argv) {
    std::string cli;
#ifdef CLI_BIN_PATH
    cli = CLI_BIN_PATH;
#endif
    if (argc > 1) cli = argv[1];

    linear_coincidence();
    finite_horizon_oracle();
    contraction_certificate();
    iterate_machinery();
    cross_algorithm_agreement();
    policy_iteration_set_inclusion();
    truncation_criterion();
    house_selling_criterion();
    preset_criterion();
    if (!cli.empty())
        determinism_criterion(cli);
    else
        report("determinism", false, "no CLI binary path provided");

    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
