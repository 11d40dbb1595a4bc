#include "nonlin_mdp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

namespace nonlin_mdp {

namespace {

int g_sweep_threads = 1;

template <typename Fn>
void for_each_state(std::size_t S, Fn&& fn) {
    if (g_sweep_threads <= 1 || S < 64) {
        for (std::size_t x = 0; x < S; ++x) fn(x);
        return;
    }
    const int nt = std::min<std::size_t>(g_sweep_threads, S);
    std::vector<std::thread> workers;
    workers.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        workers.emplace_back([&, t] {
            for (std::size_t x = t; x < S; x += nt) fn(x);
        });
    }
    for (auto& w : workers) w.join();
}

/// Expected discounted continuation sum_y delta(v(y)) q(y|x,a); zero-probability
/// successors are skipped so that -inf values never poison them.
double expected_continuation(const FiniteModel& model, const DiscountFunction& d,
                             const ValueTable& v, std::size_t x, int a) {
    const auto& row = model.transition[x][a];
    double sum = 0.0;
    for (std::size_t y = 0; y < row.size(); ++y) {
        if (row[y] == 0.0) continue;
        const double dv = d.delta(v[y]);
        if (is_neg_inf(dv)) return neg_inf;
        sum += dv * row[y];
    }
    return sum;
}

double s_value(const FiniteModel& model, const DiscountFunction& d, const ValueTable& v,
               std::size_t x, int a) {
    const double u = model.utility[x][a];
    if (is_neg_inf(u)) return neg_inf;
    const double cont = expected_continuation(model, d, v, x, a);
    if (is_neg_inf(cont)) return neg_inf;
    return u + cont;
}

} // namespace

void set_sweep_threads(int n) { g_sweep_threads = std::max(1, n); }
int sweep_threads() { return g_sweep_threads; }

std::vector<std::vector<double>> apply_S(const FiniteModel& model, const DiscountFunction& d,
                                         const ValueTable& v) {
    const std::size_t S = model.num_states();
    std::vector<std::vector<double>> out(S, std::vector<double>(model.num_actions(),
                                                                std::nan("")));
    for_each_state(S, [&](std::size_t x) {
        for (int a : model.admissible[x]) out[x][a] = s_value(model, d, v, x, a);
    });
    return out;
}

std::pair<ValueTable, std::vector<std::vector<int>>>
bellman_T(const FiniteModel& model, const DiscountFunction& d, const ValueTable& v,
          double gap_tol) {
    const std::size_t S = model.num_states();
    ValueTable out;
    out.values.assign(S, 0.0);
    out.allows_neg_inf = v.allows_neg_inf;
    std::vector<std::vector<int>> argmax(S);
    for_each_state(S, [&](std::size_t x) {
        double best = neg_inf;
        for (int a : model.admissible[x])
            best = std::max(best, s_value(model, d, v, x, a));
        out.values[x] = best;
        auto& ties = argmax[x];
        for (int a : model.admissible[x]) {
            const double sv = s_value(model, d, v, x, a);
            if (sv >= best - gap_tol || (is_neg_inf(best) && is_neg_inf(sv)))
                ties.push_back(a);
        }
    });
    return {std::move(out), std::move(argmax)};
}

ValueTable policy_T(const FiniteModel& model, const DiscountFunction& d,
                    const StationaryPolicy& f, const ValueTable& v) {
    const std::size_t S = model.num_states();
    ValueTable out;
    out.values.assign(S, 0.0);
    out.allows_neg_inf = v.allows_neg_inf;
    for_each_state(S, [&](std::size_t x) { out.values[x] = s_value(model, d, v, x, f[x]); });
    return out;
}

double bellman_residual(const FiniteModel& model, const DiscountFunction& d,
                        const ValueTable& v) {
    auto [tv, ties] = bellman_T(model, d, v);
    return weighted_diff(tv, v, model);
}

namespace {

StationaryPolicy lowest_index_argmax(const std::vector<std::vector<int>>& argmax) {
    StationaryPolicy f;
    f.choice.reserve(argmax.size());
    for (const auto& ties : argmax) f.choice.push_back(ties.front());
    return f;
}

/// Shared fixed-point loop for T and T_f.
template <typename Sweep>
SolveReport iterate_to_fixed_point(const FiniteModel& model, const DiscountFunction& d,
                                   double tol, int cap, const ValueTable& v0, Sweep&& sweep) {
    const ModelConstants mc = validate_model(model, Mode::bounded);
    if (mc.alpha > 1.0 && !check_alpha_gamma(d, mc.alpha))
        throw ParamError("value iteration: alpha > 1 but alpha*gamma(y) < y fails on samples");
    const GammaIterates gi = gamma_tilde_iterates(d, mc.alpha, mc.z, std::min(tol, 1e-10));

    SolveReport rep;
    rep.z = mc.z;
    rep.L_tilde = gi.L_tilde;

    ValueTable v = v0;
    std::vector<std::vector<int>> argmax;
    double apriori = gi.L_tilde; // gt^(0)(L(z))
    rep.status = SolveStatus::iteration_cap;
    for (int n = 1; n <= cap; ++n) {
        auto [w, ties] = sweep(v);
        const double succ = weighted_diff(w, v, model);
        apriori = gamma_tilde(d, mc.alpha, apriori);
        if (!rep.trace.empty()) rep.trace.back().residual = succ; // residual of v_{n-1}
        rep.trace.push_back({n, succ, apriori, 0.0});
        v = std::move(w);
        argmax = std::move(ties);
        rep.iterations = n;
        if (apriori < tol || succ < tol) {
            rep.status = SolveStatus::converged;
            break;
        }
    }
    rep.value = std::move(v);
    if (!argmax.empty()) rep.policy = lowest_index_argmax(argmax);
    rep.final_residual = bellman_residual(model, d, rep.value);
    if (!rep.trace.empty()) rep.trace.back().residual = rep.final_residual;
    return rep;
}

} // namespace

SolveReport value_iterate(const FiniteModel& model, const DiscountFunction& d, double tol,
                          int cap, std::optional<ValueTable> v0) {
    ValueTable start = v0 ? *v0 : ValueTable::zeros(model.num_states());
    auto rep = iterate_to_fixed_point(model, d, tol, cap, start,
                                      [&](const ValueTable& v) { return bellman_T(model, d, v); });
    return rep;
}

SolveReport evaluate_stationary(const FiniteModel& model, const DiscountFunction& d,
                                const StationaryPolicy& f, double tol, int cap) {
    check_policy(f, model);
    auto rep = iterate_to_fixed_point(
        model, d, tol, cap, ValueTable::zeros(model.num_states()),
        [&](const ValueTable& v) {
            return std::pair<ValueTable, std::vector<std::vector<int>>>{policy_T(model, d, f, v),
                                                                        {}};
        });
    rep.policy = f;
    // The residual that matters here is against T_f, not T.
    rep.final_residual = weighted_diff(policy_T(model, d, f, rep.value), rep.value, model);
    return rep;
}

ValueTable evaluate_finite_horizon(const FiniteModel& model, const DiscountFunction& d,
                                   const std::vector<StationaryPolicy>& policy_seq, int n) {
    if (n < 0 || policy_seq.size() < static_cast<std::size_t>(n))
        throw ParamError("evaluate_finite_horizon: need n policies");
    ValueTable w = ValueTable::zeros(model.num_states());
    for (int k = n - 1; k >= 0; --k) w = policy_T(model, d, policy_seq[k], w);
    return w;
}

MaximiserSets policy_iteration_sets(const FiniteModel& model, const DiscountFunction& d,
                                    int n_max, double gap_tol, double vi_tol, int vi_cap) {
    SolveReport vi = value_iterate(model, d, vi_tol, vi_cap);
    if (vi.status != SolveStatus::converged)
        throw NotConverged("policy_iteration_sets: value iteration hit the cap");

    const std::size_t S = model.num_states();
    MaximiserSets out;
    out.per_iteration.reserve(n_max);
    ValueTable V = ValueTable::zeros(S);
    for (int n = 1; n <= n_max; ++n) {
        auto [w, ties] = bellman_T(model, d, V, gap_tol);
        out.per_iteration.push_back(std::move(ties));
        V = std::move(w);
    }
    auto [tv, limit_ties] = bellman_T(model, d, vi.value, gap_tol);
    out.limit = std::move(limit_ties);

    const int from = n_max / 2;
    out.recurring.assign(S, {});
    out.recurring_in_limit.assign(S, true);
    for (std::size_t x = 0; x < S; ++x) {
        for (int a : model.admissible[x]) {
            bool always = true;
            for (int n = from; n < n_max && always; ++n) {
                const auto& set = out.per_iteration[n][x];
                always = std::find(set.begin(), set.end(), a) != set.end();
            }
            if (always) out.recurring[x].push_back(a);
        }
        for (int a : out.recurring[x]) {
            if (std::find(out.limit[x].begin(), out.limit[x].end(), a) == out.limit[x].end())
                out.recurring_in_limit[x] = false;
        }
    }
    return out;
}

HowardResult howard_solve(const FiniteModel& model, const DiscountFunction& d,
                          const StationaryPolicy& f0, double tol, int cap, double gap_tol) {
    check_policy(f0, model);
    HowardResult res;
    StationaryPolicy f = f0;
    std::set<std::vector<int>> seen;

    for (int k = 0; k < cap; ++k) {
        if (!seen.insert(f.choice).second)
            throw CycleError("howard_solve: policy repeated without improvement beyond gap_tol");
        // cap bounds the outer improvement loop only; the inner evaluation
        // needs however many sweeps the tolerance demands
        SolveReport ev = evaluate_stationary(model, d, f, tol, std::max(cap, 1000000));
        res.policy_seq.push_back(f);
        res.policy_values.push_back(ev.value);

        const auto sv = apply_S(model, d, ev.value);
        bool any = false;
        StationaryPolicy g = f;
        for (std::size_t x = 0; x < model.num_states(); ++x) {
            for (int a : model.admissible[x]) {
                if (sv[x][a] > ev.value[x] + gap_tol) {
                    g.choice[x] = a;
                    any = true;
                    break; // lowest admissible index wins
                }
            }
        }
        if (!any) {
            res.report = std::move(ev);
            res.report.policy = f;
            res.report.iterations = k + 1;
            res.report.final_residual = bellman_residual(model, d, res.report.value);
            res.report.status = SolveStatus::converged;
            return res;
        }
        f = g;
    }
    throw NotConverged("howard_solve: outer iteration cap reached");
}

std::vector<double> default_K_schedule() {
    std::vector<double> ks;
    for (double k = 1.0; k <= 65536.0; k *= 2.0) ks.push_back(k);
    return ks;
}

TruncationReport truncation_solve(const FiniteModel& model, const DiscountFunction& d,
                                  const std::vector<double>& K_schedule, double tol, int cap) {
    if (K_schedule.empty()) throw ParamError("truncation_solve: empty K schedule");
    for (std::size_t i = 1; i < K_schedule.size(); ++i)
        if (!(K_schedule[i] > K_schedule[i - 1]))
            throw ParamError("truncation_solve: K schedule must increase");
    validate_model(model, Mode::unbounded_below); // checks u <= c*omega and the tables

    TruncationReport rep;
    rep.K_schedule = K_schedule;
    for (double K : K_schedule) {
        FiniteModel clamped = model;
        clamped.mode = Mode::bounded;
        for (std::size_t x = 0; x < model.num_states(); ++x)
            for (int a : model.admissible[x])
                clamped.utility[x][a] = std::max(model.utility[x][a], 1.0 - K);
        SolveReport sr = value_iterate(clamped, d, tol, cap);
        if (sr.status != SolveStatus::converged)
            throw NotConverged("truncation_solve: inner value iteration hit the cap at K=" +
                               std::to_string(K));
        if (!rep.per_K_values.empty()) {
            const auto& prev = rep.per_K_values.back();
            for (std::size_t x = 0; x < sr.value.size(); ++x)
                if (sr.value[x] > prev[x] + 1e-10)
                    throw MonotonicityViolation(
                        "truncation_solve: v^{*,K} increased by more than 1e-10 at state " +
                        std::to_string(x) + "; solver tolerance too loose");
        }
        rep.per_K_values.push_back(sr.value);
        rep.policy = sr.policy;
    }
    rep.v_infinity = rep.per_K_values.back();
    rep.stabilized.assign(model.num_states(), true);
    if (rep.per_K_values.size() >= 2) {
        const auto& last = rep.per_K_values.back();
        const auto& prev = rep.per_K_values[rep.per_K_values.size() - 2];
        for (std::size_t x = 0; x < last.size(); ++x)
            rep.stabilized[x] = std::abs(last[x] - prev[x]) <= 1e-8 * model.weight[x];
    }
    return rep;
}

} // namespace nonlin_mdp
