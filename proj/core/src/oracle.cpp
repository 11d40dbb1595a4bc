#include "nonlin_mdp/oracle.hpp"

#include <cmath>

namespace nonlin_mdp {
namespace oracle {

namespace {

constexpr double prune_floor = 1e-15;
constexpr double max_tree_nodes = 1e6;

void guard_tree_size(const FiniteModel& model, int n) {
    const double per_stage = static_cast<double>(model.num_states()) *
                             static_cast<double>(model.num_actions());
    if (std::pow(per_stage, n) > max_tree_nodes)
        throw TreeTooLarge("history tree exceeds the 1e6 node guard");
}

/// U over the subtree rooted at history h at stage k (1-based), horizon n.
double un_recurse(const FiniteModel& model, const DiscountFunction& d, const HistoryPolicy& hp,
                  int n, int k, History& h, double path_prob, TreeStats& stats) {
    const int x = h.terminal_state();
    const int a = hp(h);
    const double u = model.utility[x][a];
    if (k == n) return u;
    if (is_neg_inf(u)) return neg_inf;

    const auto& row = model.transition[x][a];
    double cont = 0.0;
    for (std::size_t y = 0; y < row.size(); ++y) {
        if (row[y] == 0.0) continue;
        const double p = path_prob * row[y];
        if (p < prune_floor) {
            stats.pruned_mass += p;
            continue;
        }
        h.actions.push_back(a);
        h.states.push_back(static_cast<int>(y));
        const double child = un_recurse(model, d, hp, n, k + 1, h, p, stats);
        h.states.pop_back();
        h.actions.pop_back();
        const double dc = d.delta(child);
        if (is_neg_inf(dc)) return neg_inf;
        cont += dc * row[y];
    }
    return u + cont;
}

double rn_recurse(const FiniteModel& model, const DiscountFunction& d, const HistoryPolicy& hp,
                  int n, int k, History& h, double path_prob,
                  std::vector<std::pair<int, int>>& path, TreeStats& stats) {
    const int x = h.terminal_state();
    const int a = hp(h);
    path.emplace_back(x, a);
    double total = 0.0;
    if (k == n) {
        // Full path collected: aggregate r_n backward along it.
        double r = model.utility[path.back().first][path.back().second];
        for (int j = static_cast<int>(path.size()) - 2; j >= 0; --j) {
            const double u = model.utility[path[j].first][path[j].second];
            const double dr = d.delta(r);
            r = (is_neg_inf(u) || is_neg_inf(dr)) ? neg_inf : u + dr;
        }
        total = r * path_prob;
    } else {
        const auto& row = model.transition[x][a];
        for (std::size_t y = 0; y < row.size(); ++y) {
            if (row[y] == 0.0) continue;
            const double p = path_prob * row[y];
            if (p < prune_floor) {
                stats.pruned_mass += p;
                continue;
            }
            h.actions.push_back(a);
            h.states.push_back(static_cast<int>(y));
            total += rn_recurse(model, d, hp, n, k + 1, h, p, path, stats);
            h.states.pop_back();
            h.actions.pop_back();
        }
    }
    path.pop_back();
    return total;
}

} // namespace

double enumerate_histories_Un(const FiniteModel& model, const DiscountFunction& d,
                              const HistoryPolicy& hp, int n, int x0, TreeStats* stats) {
    if (n < 1) throw ParamError("enumerate_histories_Un: n must be >= 1");
    guard_tree_size(model, n);
    TreeStats local;
    History h;
    h.states.push_back(x0);
    const double v = un_recurse(model, d, hp, n, 1, h, 1.0, local);
    if (stats) *stats = local;
    return v;
}

double pathwise_Rn(const FiniteModel& model, const DiscountFunction& d, const HistoryPolicy& hp,
                   int n, int x0, TreeStats* stats) {
    if (n < 1) throw ParamError("pathwise_Rn: n must be >= 1");
    guard_tree_size(model, n);
    TreeStats local;
    History h;
    h.states.push_back(x0);
    std::vector<std::pair<int, int>> path;
    const double v = rn_recurse(model, d, hp, n, 1, h, 1.0, path, local);
    if (stats) *stats = local;
    return v;
}

ClassicalVI classical_discounted_VI(const FiniteModel& model, double beta, double tol, int cap) {
    if (!(beta > 0.0 && beta < 1.0)) throw ParamError("classical_discounted_VI: beta in (0,1)");
    validate_model(model, Mode::bounded);
    const std::size_t S = model.num_states();

    ClassicalVI out;
    std::vector<double> v(S, 0.0), w(S, 0.0);
    std::vector<int> pol(S, 0);
    for (int n = 1; n <= cap; ++n) {
        double diff = 0.0;
        for (std::size_t x = 0; x < S; ++x) {
            double best = neg_inf;
            int best_a = model.admissible[x].front();
            for (int a : model.admissible[x]) {
                double s = model.utility[x][a];
                const auto& row = model.transition[x][a];
                for (std::size_t y = 0; y < S; ++y) s += beta * v[y] * row[y];
                if (s > best) {
                    best = s;
                    best_a = a;
                }
            }
            w[x] = best;
            pol[x] = best_a;
            diff = std::max(diff, std::abs(w[x] - v[x]) / model.weight[x]);
        }
        v = w;
        out.iterations = n;
        // classical a-posteriori bound: ||v_n - v*|| <= beta/(1-beta) * diff
        if (diff * beta / (1.0 - beta) < tol) {
            out.value = ValueTable{v, false};
            out.policy = StationaryPolicy{pol};
            return out;
        }
    }
    throw NotConverged("classical_discounted_VI: iteration cap reached");
}

} // namespace oracle
} // namespace nonlin_mdp
