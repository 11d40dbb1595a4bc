#include "nonlin_mdp/builders.hpp"

#include <cmath>
#include <numeric>

namespace nonlin_mdp {
namespace builders {

namespace {

std::vector<double> uniform_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return g;
}

/// Nearest grid index after clamping to [grid.front(), grid.back()].
std::size_t project(const std::vector<double>& grid, double v) {
    if (v <= grid.front()) return 0;
    if (v >= grid.back()) return grid.size() - 1;
    std::size_t best = 0;
    double best_d = std::abs(grid[0] - v);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double dd = std::abs(grid[i] - v);
        if (dd < best_d) {
            best_d = dd;
            best = i;
        }
    }
    return best;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

FiniteModel grid_model_skeleton(const std::vector<double>& state_grid,
                                const std::vector<double>& action_grid) {
    FiniteModel m;
    const std::size_t S = state_grid.size(), A = action_grid.size();
    for (double x : state_grid) {
        m.state_labels.push_back(fmt(x));
        m.state_coords.push_back(x);
    }
    for (double a : action_grid) m.action_labels.push_back(fmt(a));
    m.admissible.assign(S, {});
    m.transition.assign(S, std::vector<std::vector<double>>(A, std::vector<double>(S, 0.0)));
    m.utility.assign(S, std::vector<double>(A, 0.0));
    m.weight.assign(S, 1.0);
    return m;
}

} // namespace

double ShockDistribution::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) m += support[i] * probabilities[i];
    return m;
}

void ShockDistribution::validate() const {
    if (support.empty() || support.size() != probabilities.size())
        throw ParamError("shock distribution: support/probability size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] < 0.0) throw ParamError("shock distribution: negative support point");
        if (probabilities[i] < 0.0) throw ParamError("shock distribution: negative probability");
        sum += probabilities[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw StochasticityError("shock distribution: probabilities sum to " + std::to_string(sum));
}

BuiltModel build_growth1(double x_max, int grid_n, const ShockDistribution& shocks, double eps) {
    if (grid_n < 2) throw GridError("build_growth1: grid_n must be >= 2");
    shocks.validate();
    if (shocks.mean() > 1.0 + 1e-12)
        throw MeanShockError("build_growth1: mean shock exceeds 1");

    const auto grid = uniform_grid(0.0, x_max, grid_n);
    FiniteModel m = grid_model_skeleton(grid, grid);
    const std::size_t S = grid.size();
    for (std::size_t x = 0; x < S; ++x) {
        m.weight[x] = std::sqrt(grid[x] + 1.0);
        for (std::size_t a = 0; a < S; ++a) {
            if (grid[a] > grid[x] + 1e-12) continue;
            m.admissible[x].push_back(static_cast<int>(a));
            m.utility[x][a] = std::sqrt(grid[a]);
            const double invest = grid[x] - grid[a];
            for (std::size_t s = 0; s < shocks.support.size(); ++s) {
                const std::size_t y = project(grid, invest * shocks.support[s]);
                m.transition[x][a][y] += shocks.probabilities[s];
            }
        }
    }
    BuiltModel out;
    out.model = std::move(m);
    out.discount = make_log_blend(eps, LogBlendVariant::one);
    out.alpha_formula = 1.0;
    out.alpha_measured = validate_model(out.model).alpha;
    return out;
}

BuiltModel build_growth2(double x_max, int grid_n, double rho, double theta, double sigma,
                         double r, double eps, const ShockDistribution& shocks) {
    if (grid_n < 2) throw GridError("build_growth2: grid_n must be >= 2");
    auto in01 = [](double v) { return v > 0.0 && v < 1.0; };
    if (!in01(rho) || !in01(theta) || !in01(sigma))
        throw ParamError("build_growth2: rho, theta, sigma must lie in (0,1)");
    if (r < 1.0) throw ParamError("build_growth2: r must be >= 1");
    shocks.validate();

    const double s_bar = shocks.mean();
    const double alpha =
        std::pow(1.0 + std::pow(s_bar / rho, 1.0 / (1.0 - theta)) / r, sigma);
    if (!(alpha * (1.0 - eps) < 1.0))
        throw ParamError("build_growth2: alpha=" + std::to_string(alpha) +
                         " violates alpha*(1-eps) < 1; need eps > " +
                         std::to_string(1.0 - 1.0 / alpha));

    const auto grid = uniform_grid(0.0, x_max, grid_n);
    FiniteModel m = grid_model_skeleton(grid, grid);
    const std::size_t S = grid.size();
    for (std::size_t x = 0; x < S; ++x) {
        m.weight[x] = std::pow(grid[x] + r, sigma);
        for (std::size_t a = 0; a < S; ++a) {
            if (grid[a] > grid[x] + 1e-12) continue;
            m.admissible[x].push_back(static_cast<int>(a));
            m.utility[x][a] = std::pow(grid[a], sigma);
            const double y = grid[x] - grid[a];
            for (std::size_t s = 0; s < shocks.support.size(); ++s) {
                const double next = std::pow(y, theta) * shocks.support[s] + (1.0 - rho) * y;
                m.transition[x][a][project(grid, next)] += shocks.probabilities[s];
            }
        }
    }
    BuiltModel out;
    out.model = std::move(m);
    out.discount = make_log_blend(eps, LogBlendVariant::two);
    out.alpha_formula = alpha;
    out.alpha_measured = validate_model(out.model).alpha;
    return out;
}

BuiltModel build_inventory(double stock_max, int grid_n, const ShockDistribution& demand,
                           double p, const std::vector<double>& order_costs, double a_hat) {
    if (grid_n < 2) throw GridError("build_inventory: grid_n must be >= 2");
    if (order_costs.empty() || order_costs.front() != 0.0)
        throw ParamError("build_inventory: order cost schedule must start with C(0) = 0");
    demand.validate();

    const auto grid = uniform_grid(0.0, stock_max, grid_n);
    const int n_orders = static_cast<int>(order_costs.size());
    std::vector<double> orders(n_orders, 0.0);
    for (int i = 0; i < n_orders; ++i)
        orders[i] = n_orders == 1 ? 0.0 : a_hat * static_cast<double>(i) / (n_orders - 1);

    FiniteModel m = grid_model_skeleton(grid, orders);
    const std::size_t S = grid.size();
    for (std::size_t x = 0; x < S; ++x) {
        double expected_sales = 0.0;
        for (std::size_t s = 0; s < demand.support.size(); ++s)
            expected_sales += std::min(grid[x], demand.support[s]) * demand.probabilities[s];
        for (int a = 0; a < n_orders; ++a) {
            m.admissible[x].push_back(a);
            m.utility[x][a] = p * expected_sales - order_costs[a];
            for (std::size_t s = 0; s < demand.support.size(); ++s) {
                const double next = grid[x] - std::min(grid[x], demand.support[s]) + orders[a];
                m.transition[x][a][project(grid, next)] += demand.probabilities[s];
            }
        }
    }
    BuiltModel out;
    out.model = std::move(m);
    out.discount = make_log_blend(0.5, LogBlendVariant::one);
    out.alpha_formula = 1.0;
    out.alpha_measured = validate_model(out.model).alpha;
    return out;
}

FiniteModel build_stopping(const std::vector<double>& x_values, const std::vector<double>& q0,
                           const std::vector<std::vector<double>>& q_rows,
                           const std::vector<double>& reward_R,
                           const std::vector<double>& cost_C) {
    const std::size_t S = x_values.size();
    if (q_rows.size() != S || reward_R.size() != S || cost_C.size() != S ||
        (!q0.empty() && q0.size() != S))
        throw ParamError("build_stopping: input sizes disagree");

    FiniteModel m;
    const std::size_t T = S + 1; // absorbing "stopped" state at index S
    for (std::size_t x = 0; x < S; ++x) {
        m.state_labels.push_back(fmt(x_values[x]));
        m.state_coords.push_back(x_values[x]);
    }
    m.state_labels.push_back("stopped");
    m.state_coords.push_back(std::nan(""));
    m.action_labels = {"continue", "stop"};
    m.admissible.assign(T, {0, 1});
    m.transition.assign(T, std::vector<std::vector<double>>(2, std::vector<double>(T, 0.0)));
    m.utility.assign(T, std::vector<double>(2, 0.0));
    m.weight.assign(T, 1.0);

    // Constant weight dominating R and C keeps the drift constant at 1.
    double w = 1.0;
    for (std::size_t x = 0; x < S; ++x) {
        if (!std::isfinite(reward_R[x]) || !std::isfinite(cost_C[x]))
            throw BoundError("build_stopping: R and C must be finite");
        w = std::max({w, std::abs(reward_R[x]), std::abs(cost_C[x])});
    }
    for (std::size_t x = 0; x < S; ++x) {
        m.weight[x] = w;
        if (q_rows[x].size() != S)
            throw ParamError("build_stopping: q row size mismatch");
        for (std::size_t y = 0; y < S; ++y) m.transition[x][0][y] = q_rows[x][y];
        m.transition[x][1][S] = 1.0;
        m.utility[x][0] = cost_C[x];
        m.utility[x][1] = reward_R[x];
    }
    m.transition[S][0][S] = 1.0;
    m.transition[S][1][S] = 1.0;
    return m;
}

StoppingAnalysis solve_house_selling(double m, double M, const ShockDistribution& offer_dist,
                                     double c, const DiscountFunction& d, double tol, int cap) {
    if (!(0.0 < m && m < M)) throw ParamError("solve_house_selling: need 0 < m < M");
    offer_dist.validate();
    for (double s : offer_dist.support)
        if (s < m - 1e-12 || s > M + 1e-12)
            throw ParamError("solve_house_selling: offer outside [m, M]");

    const std::size_t S = offer_dist.support.size();
    std::vector<std::vector<double>> q_rows(S, offer_dist.probabilities);
    std::vector<double> R = offer_dist.support;
    std::vector<double> C(S, -c);

    StoppingAnalysis out;
    out.model = build_stopping(offer_dist.support, offer_dist.probabilities, q_rows, R, C);
    SolveReport sr = value_iterate(out.model, d, tol, cap);
    if (sr.status != SolveStatus::converged)
        throw NotConverged("solve_house_selling: value iteration hit the cap");
    out.value = sr.value;

    double cstar = 0.0;
    for (std::size_t y = 0; y < S; ++y)
        cstar += d.delta(sr.value[y]) * offer_dist.probabilities[y];
    out.continuation_constant = cstar;
    out.threshold = -c + cstar;

    // The continue-row continuation must not depend on the state.
    double spread = 0.0;
    for (std::size_t x = 0; x < S; ++x) {
        double cont = 0.0;
        for (std::size_t y = 0; y < S; ++y)
            cont += d.delta(sr.value[y]) * out.model.transition[x][0][y];
        spread = std::max(spread, std::abs(cont - cstar));
    }
    out.state_independence_spread = spread;

    out.stop_region.assign(S, false);
    double accept_prob = 0.0;
    for (std::size_t x = 0; x < S; ++x) {
        out.stop_region[x] = offer_dist.support[x] >= out.threshold - 1e-12;
        if (out.stop_region[x]) accept_prob += offer_dist.probabilities[x];
    }
    out.stop_time_finite = accept_prob > 0.0;
    return out;
}

ValueTable ChainModel::family(double r) const {
    ValueTable v;
    v.values.reserve(model.num_states());
    for (std::size_t x = 0; x < model.num_states(); ++x)
        v.values.push_back(r / std::pow(beta, static_cast<double>(x + 1)));
    return v;
}

ChainModel build_chain_counterexample(int n_states, double beta) {
    if (n_states < 3) throw ParamError("build_chain_counterexample: need at least 3 states");
    if (!(beta > 0.0 && beta < 1.0)) throw ParamError("build_chain_counterexample: beta in (0,1)");
    ChainModel out;
    out.beta = beta;
    FiniteModel& m = out.model;
    const std::size_t S = static_cast<std::size_t>(n_states);
    for (std::size_t x = 0; x < S; ++x) {
        m.state_labels.push_back(std::to_string(x + 1));
        m.state_coords.push_back(static_cast<double>(x + 1));
    }
    m.action_labels = {"advance"};
    m.admissible.assign(S, {0});
    m.transition.assign(S, std::vector<std::vector<double>>(1, std::vector<double>(S, 0.0)));
    m.utility.assign(S, std::vector<double>(1, 0.0));
    m.weight.assign(S, 1.0);
    for (std::size_t x = 0; x + 1 < S; ++x) m.transition[x][0][x + 1] = 1.0;
    m.transition[S - 1][0][S - 1] = 1.0; // truncation artifact: last state self-loops
    return out;
}

} // namespace builders
} // namespace nonlin_mdp
