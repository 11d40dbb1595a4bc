#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "nonlin_mdp/errors.hpp"

namespace nonlin_mdp {

/// Extended reals: a plain double with -infinity as the only allowed
/// non-finite value.  Arithmetic contract: (-inf) + r = -inf, and the
/// discount functions map -inf to -inf.  -inf never appears in transition
/// or weight tables.
inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

inline bool is_neg_inf(double v) { return v == neg_inf; }

enum class Mode { bounded, unbounded_below };

/// A discretized MDP with finite state and action sets.  Transition and
/// utility tables are defined only for admissible (state, action) pairs;
/// non-admissible slots are present but must never be read.
struct FiniteModel {
    std::vector<std::string> state_labels;
    std::vector<double> state_coords; // optional grid coordinate per state (NaN if absent)
    std::vector<std::string> action_labels;
    std::vector<std::vector<int>> admissible;          // per state, nonempty
    std::vector<std::vector<std::vector<double>>> transition; // [x][a][y]
    std::vector<std::vector<double>> utility;          // [x][a], -inf allowed in unbounded mode
    std::vector<double> weight;                        // omega, >= 1
    Mode mode = Mode::bounded;

    std::size_t num_states() const { return weight.size(); }
    std::size_t num_actions() const { return action_labels.size(); }
};

/// Constants extracted from a validated model.
struct ModelConstants {
    double b = 0;     // lower bound multiplier, +inf in unbounded mode
    double c = 0;     // upper bound multiplier
    double z = 0;     // max{b, c}, finite only in bounded mode
    double alpha = 0; // weight drift: max of sum_y w(y) q[x][a][y] / w(x)
};

struct ValueTable {
    std::vector<double> values;
    bool allows_neg_inf = false;

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    static ValueTable zeros(std::size_t n) { return ValueTable{std::vector<double>(n, 0.0), false}; }
};

struct StationaryPolicy {
    std::vector<int> choice; // per-state action index, in admissible[x]

    std::size_t size() const { return choice.size(); }
    int operator[](std::size_t i) const { return choice[i]; }
};

/// max over states of |v[x]| / omega[x].  Throws NormError on non-finite entries.
double weighted_norm(const ValueTable& v, const FiniteModel& model);

/// weighted_norm of the entrywise difference.
double weighted_diff(const ValueTable& v1, const ValueTable& v2, const FiniteModel& model);

/// Checks row-stochasticity, omega >= 1 and the utility bounds, then
/// returns the constants b, c, z, alpha measured from the tables.
/// In bounded mode -inf utilities are rejected.
ModelConstants validate_model(const FiniteModel& model, Mode mode);

inline ModelConstants validate_model(const FiniteModel& model) {
    return validate_model(model, model.mode);
}

void check_policy(const StationaryPolicy& f, const FiniteModel& model);

} // namespace nonlin_mdp
