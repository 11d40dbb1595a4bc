#pragma once

#include <optional>
#include <vector>

#include "nonlin_mdp/discount.hpp"
#include "nonlin_mdp/model.hpp"

namespace nonlin_mdp {

enum class SolveStatus { converged, iteration_cap };

struct TraceRow {
    int iter = 0;
    double succ_diff_weighted = 0; // ||v_n - v_{n-1}||_w
    double apriori_bound = 0;      // gt^(n)(L(z))
    double residual = 0;           // ||T v_n - v_n||_w
};

struct SolveReport {
    ValueTable value;
    StationaryPolicy policy;
    int iterations = 0;
    std::vector<TraceRow> trace;
    SolveStatus status = SolveStatus::converged;
    double final_residual = 0;
    double L_tilde = 0;
    double z = 0;
};

struct MaximiserSets {
    std::vector<std::vector<std::vector<int>>> per_iteration; // [n][x] -> argmax sets A*_n(x)
    std::vector<std::vector<int>> limit;                      // [x] -> A*(x)
    std::vector<std::vector<int>> recurring;                  // actions in every late A*_n(x)
    std::vector<bool> recurring_in_limit;                     // per state
};

struct TruncationReport {
    std::vector<double> K_schedule;
    std::vector<ValueTable> per_K_values; // v^{*,K}
    ValueTable v_infinity;                // values at the largest K
    StationaryPolicy policy;              // argmax of the final Bellman backup
    std::vector<bool> stabilized;         // per state: last two v^{*,K} within 1e-8 * w(x)
    bool monotone = true;
};

/// Sv(x,a) = u(x,a) + sum_y delta(v(y)) q(y|x,a) on admissible pairs.
/// Non-admissible slots are left as NaN.
std::vector<std::vector<double>> apply_S(const FiniteModel& model, const DiscountFunction& d,
                                         const ValueTable& v);

/// One Bellman backup; returns the maxima and all per-state argmax
/// indices (ties within gap_tol kept).
std::pair<ValueTable, std::vector<std::vector<int>>>
bellman_T(const FiniteModel& model, const DiscountFunction& d, const ValueTable& v,
          double gap_tol = 0.0);

/// T_f: entrywise Sv(x, f(x)).
ValueTable policy_T(const FiniteModel& model, const DiscountFunction& d,
                    const StationaryPolicy& f, const ValueTable& v);

/// ||Tv - v||_w.
double bellman_residual(const FiniteModel& model, const DiscountFunction& d, const ValueTable& v);

/// Value iteration from v_0 = 0 with the dual stopping rule: either the
/// a-priori tail bound gt^(n)(L(z)) drops below tol, or both the
/// successive weighted difference and the Bellman residual do.
SolveReport value_iterate(const FiniteModel& model, const DiscountFunction& d, double tol,
                          int cap, std::optional<ValueTable> v0 = std::nullopt);

/// Fixed point of T_f from v_0 = 0; equals U(., f).
SolveReport evaluate_stationary(const FiniteModel& model, const DiscountFunction& d,
                                const StationaryPolicy& f, double tol, int cap);

/// Backward composition w_n = 0, w_{k-1} = T_{pi_k} w_k over a Markov
/// policy sequence; returns w_0.
ValueTable evaluate_finite_horizon(const FiniteModel& model, const DiscountFunction& d,
                                   const std::vector<StationaryPolicy>& policy_seq, int n);

/// A*_n(x) from V_n = T^(n)0 plus the limit sets A*(x) from v*.
MaximiserSets policy_iteration_sets(const FiniteModel& model, const DiscountFunction& d,
                                    int n_max, double gap_tol = 1e-9, double vi_tol = 1e-12,
                                    int vi_cap = 1000000);

struct HowardResult {
    SolveReport report;
    std::vector<StationaryPolicy> policy_seq;       // f_0, f_1, ...
    std::vector<ValueTable> policy_values;          // U_{f_0}, U_{f_1}, ...
};

/// Howard improvement: evaluate U_{f_k}, swap in strictly improving
/// actions (lowest index, keeping f_k(x) where possible), stop when no
/// improvement set is nonempty.
HowardResult howard_solve(const FiniteModel& model, const DiscountFunction& d,
                          const StationaryPolicy& f0, double tol, int cap,
                          double gap_tol = 1e-9);

/// Clamps utilities to u^K = max{u, 1-K} along the schedule and solves
/// each bounded model; checks entrywise monotone decrease in K.
TruncationReport truncation_solve(const FiniteModel& model, const DiscountFunction& d,
                                  const std::vector<double>& K_schedule, double tol, int cap);

std::vector<double> default_K_schedule(); // 1, 2, 4, ..., 2^16

/// Number of worker threads used by the per-state sweeps (1 = sequential).
void set_sweep_threads(int n);
int sweep_threads();

} // namespace nonlin_mdp
