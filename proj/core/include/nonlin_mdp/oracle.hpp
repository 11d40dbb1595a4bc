#pragma once

#include <functional>
#include <vector>

#include "nonlin_mdp/discount.hpp"
#include "nonlin_mdp/model.hpp"

namespace nonlin_mdp {
namespace oracle {

/// One decision point of an enumerated history: the states visited and the
/// actions taken so far, ending at the state awaiting a decision.
struct History {
    std::vector<int> states;  // x_1, ..., x_k
    std::vector<int> actions; // a_1, ..., a_{k-1}
    int terminal_state() const { return states.back(); }
};

/// History-dependent decision rule, one per stage.  Must return an action
/// admissible at the history's terminal state.
class HistoryPolicy {
public:
    using Rule = std::function<int(const History&)>;

    explicit HistoryPolicy(Rule rule) : rule_(std::move(rule)) {}

    static HistoryPolicy from_markov(const StationaryPolicy& f) {
        return HistoryPolicy([f](const History& h) { return f[h.terminal_state()]; });
    }

    /// Stage-dependent Markov sequence; stage k uses seq[k-1].
    static HistoryPolicy from_markov_seq(std::vector<StationaryPolicy> seq) {
        return HistoryPolicy([seq = std::move(seq)](const History& h) {
            const std::size_t stage = h.states.size() - 1; // 0-based
            return seq.at(stage)[h.terminal_state()];
        });
    }

    int operator()(const History& h) const { return rule_(h); }

private:
    Rule rule_;
};

struct TreeStats {
    double pruned_mass = 0.0; // probability mass dropped below the pruning floor
};

/// Evaluates the n-stage recursive discounted utility by explicit
/// recursion over the enumerated history tree, independently of the
/// solver's table sweeps.  Guard: at most ~1e6 tree nodes.
double enumerate_histories_Un(const FiniteModel& model, const DiscountFunction& d,
                              const HistoryPolicy& hp, int n, int x0,
                              TreeStats* stats = nullptr);

/// Path-aggregated n-stage utility: r_n computed per path by the backward
/// recursion r_{k} = u + delta(r_{k+1}), then weighted by path probability.
double pathwise_Rn(const FiniteModel& model, const DiscountFunction& d,
                   const HistoryPolicy& hp, int n, int x0, TreeStats* stats = nullptr);

struct ClassicalVI {
    ValueTable value;
    StationaryPolicy policy;
    int iterations = 0;
};

/// Plain expected-total-discounted-reward value iteration with discount
/// beta; the external reference for the linear-coincidence checks.
ClassicalVI classical_discounted_VI(const FiniteModel& model, double beta, double tol,
                                    int cap = 1000000);

} // namespace oracle
} // namespace nonlin_mdp
