#pragma once

#include <cstdint>

#include "nonlin_mdp/model.hpp"

namespace nonlin_mdp {

struct RandomModelOptions {
    int n_states = 5;
    int n_actions = 3;
    double u_lo = -1.0;
    double u_hi = 1.0;
    bool random_admissible = false; // random nonempty subsets instead of all actions
};

/// Deterministic seeded model generator (omega = 1, full row support).
FiniteModel make_random_model(std::uint64_t seed, const RandomModelOptions& opts = {});

/// Seeded value table with entries uniform in [lo, hi].
ValueTable make_random_values(std::uint64_t seed, std::size_t n_states, double lo, double hi);

/// Seeded admissible policy.
StationaryPolicy make_random_policy(std::uint64_t seed, const FiniteModel& model);

} // namespace nonlin_mdp
