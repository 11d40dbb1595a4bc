#pragma once

#include <vector>

#include "nonlin_mdp/discount.hpp"
#include "nonlin_mdp/model.hpp"
#include "nonlin_mdp/solver.hpp"

namespace nonlin_mdp {
namespace builders {

/// Finite discrete shock (or demand) distribution on nonnegative support.
struct ShockDistribution {
    std::vector<double> support;
    std::vector<double> probabilities;

    double mean() const;
    void validate() const; // probabilities sum to 1 within 1e-12, support >= 0
};

struct BuiltModel {
    FiniteModel model;
    DiscountFunction discount;
    double alpha_formula = 0.0; // builder-side alpha where the model fixes one
    double alpha_measured = 0.0;
};

/// Consumption-investment model: state grid on [0, x_max], actions are
/// consumption levels <= x, u = sqrt(a), next state (x-a)*shock projected
/// to the grid, omega(x) = sqrt(x+1), log-blend discount (variant one).
BuiltModel build_growth1(double x_max, int grid_n, const ShockDistribution& shocks, double eps);

/// Variant with decaying capital: next state y^theta*shock + (1-rho)*y,
/// u = a^sigma, omega(x) = (x+r)^sigma, log-blend discount (variant two).
/// Rejects parameterizations with alpha*(1-eps) >= 1.
BuiltModel build_growth2(double x_max, int grid_n, double rho, double theta, double sigma,
                         double r, double eps, const ShockDistribution& shocks);

/// Stock-and-order model: u(x,a) = p*E min{x, demand} - C(a), omega = 1.
/// Actions are an order grid on [0, a_hat]; order_costs[i] is C at the
/// i-th order level, with C(0) = 0.
BuiltModel build_inventory(double stock_max, int grid_n, const ShockDistribution& demand,
                           double p, const std::vector<double>& order_costs, double a_hat);

/// Stopping model: states augmented with an absorbing "stopped" state;
/// action 0 continues along q_rows, action 1 stops.  u = C(x) when
/// continuing, R(x) when stopping.
FiniteModel build_stopping(const std::vector<double>& x_values, const std::vector<double>& q0,
                           const std::vector<std::vector<double>>& q_rows,
                           const std::vector<double>& reward_R,
                           const std::vector<double>& cost_C);

struct StoppingAnalysis {
    FiniteModel model;
    ValueTable value;
    double continuation_constant = 0.0; // C* = sum_y delta(v*(y)) q(y)
    double threshold = 0.0;             // stop iff offer >= -c + C*
    std::vector<bool> stop_region;      // per offer state
    bool stop_time_finite = false;      // acceptance probability per step > 0
    double state_independence_spread = 0.0;
};

/// Offer-acceptance threshold analysis: offers i.i.d. on a grid of
/// [m, M], R(x) = x, C(x) = -c.
StoppingAnalysis solve_house_selling(double m, double M, const ShockDistribution& offer_dist,
                                     double c, const DiscountFunction& d, double tol,
                                     int cap = 1000000);

struct ChainModel {
    FiniteModel model;
    double beta = 0.0;
    /// The analytic fixed-point family v_r(x) = r / beta^x on states 1..n.
    ValueTable family(double r) const;
};

/// Deterministic shift chain with zero utility; the non-uniqueness example.
ChainModel build_chain_counterexample(int n_states, double beta);

} // namespace builders
} // namespace nonlin_mdp
