#pragma once

// Small hand-built models shared by the test suites.

#include <string>
#include <vector>

#include "nonlin_mdp/model.hpp"

namespace test_helpers {

using nonlin_mdp::FiniteModel;
using nonlin_mdp::Mode;

/// One state, one self-loop action with the given utility.
inline FiniteModel self_loop(double u, double omega = 1.0) {
    FiniteModel m;
    m.state_labels = {"s0"};
    m.state_coords = {0.0};
    m.action_labels = {"a0"};
    m.admissible = {{0}};
    m.transition = {{{1.0}}};
    m.utility = {{u}};
    m.weight = {omega};
    return m;
}

/// One state, n self-loop actions with the given utilities.
inline FiniteModel self_loop_multi(const std::vector<double>& us) {
    FiniteModel m;
    m.state_labels = {"s0"};
    m.state_coords = {0.0};
    m.admissible.push_back({});
    m.utility.push_back({});
    m.transition.push_back({});
    for (std::size_t a = 0; a < us.size(); ++a) {
        m.action_labels.push_back("a" + std::to_string(a));
        m.admissible[0].push_back(static_cast<int>(a));
        m.utility[0].push_back(us[a]);
        m.transition[0].push_back({1.0});
    }
    m.weight = {1.0};
    return m;
}

/// Fully connected model from explicit tables; all actions admissible
/// everywhere, omega = 1 unless given.
inline FiniteModel dense_model(const std::vector<std::vector<double>>& utility,
                               const std::vector<std::vector<std::vector<double>>>& transition,
                               std::vector<double> weight = {}) {
    FiniteModel m;
    const std::size_t S = utility.size(), A = utility[0].size();
    for (std::size_t x = 0; x < S; ++x) {
        m.state_labels.push_back("s" + std::to_string(x));
        m.state_coords.push_back(static_cast<double>(x));
    }
    for (std::size_t a = 0; a < A; ++a) m.action_labels.push_back("a" + std::to_string(a));
    m.admissible.assign(S, {});
    for (std::size_t x = 0; x < S; ++x)
        for (std::size_t a = 0; a < A; ++a) m.admissible[x].push_back(static_cast<int>(a));
    m.transition = transition;
    m.utility = utility;
    m.weight = weight.empty() ? std::vector<double>(S, 1.0) : std::move(weight);
    return m;
}

/// Reindexes states by perm (new index i holds old state perm[i]).
inline FiniteModel permute_states(const FiniteModel& m, const std::vector<int>& perm) {
    const std::size_t S = m.num_states();
    std::vector<int> inv(S);
    for (std::size_t i = 0; i < S; ++i) inv[perm[i]] = static_cast<int>(i);
    FiniteModel out = m;
    for (std::size_t i = 0; i < S; ++i) {
        const int o = perm[i];
        out.state_labels[i] = m.state_labels[o];
        out.state_coords[i] = m.state_coords[o];
        out.admissible[i] = m.admissible[o];
        out.utility[i] = m.utility[o];
        out.weight[i] = m.weight[o];
        for (std::size_t a = 0; a < m.transition[o].size(); ++a)
            for (std::size_t y = 0; y < S; ++y)
                out.transition[i][a][inv[y]] = m.transition[o][a][y];
    }
    return out;
}

} // namespace test_helpers
