#include "nonlin_mdp/model.hpp"

#include <cmath>
#include <cstdio>

namespace nonlin_mdp {

namespace {
constexpr double row_tol = 1e-12;
constexpr double c_floor = 1e-9; // keeps gamma-bound formulas positive when max u/omega <= 0

std::string at(std::size_t x, std::size_t a) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "(x=%zu, a=%zu)", x, a);
    return buf;
}
} // namespace

double weighted_norm(const ValueTable& v, const FiniteModel& model) {
    double m = 0.0;
    for (std::size_t x = 0; x < v.size(); ++x) {
        if (!std::isfinite(v[x]))
            throw NormError("weighted_norm: non-finite entry at state " + std::to_string(x));
        m = std::max(m, std::abs(v[x]) / model.weight[x]);
    }
    return m;
}

double weighted_diff(const ValueTable& v1, const ValueTable& v2, const FiniteModel& model) {
    double m = 0.0;
    for (std::size_t x = 0; x < v1.size(); ++x) {
        if (!std::isfinite(v1[x]) || !std::isfinite(v2[x]))
            throw NormError("weighted_diff: non-finite entry at state " + std::to_string(x));
        m = std::max(m, std::abs(v1[x] - v2[x]) / model.weight[x]);
    }
    return m;
}

ModelConstants validate_model(const FiniteModel& model, Mode mode) {
    const std::size_t S = model.num_states();
    if (S == 0) throw ParamError("validate_model: empty state set");
    if (model.admissible.size() != S || model.transition.size() != S ||
        model.utility.size() != S || model.weight.size() != S)
        throw ParamError("validate_model: table sizes disagree with state count");

    for (std::size_t x = 0; x < S; ++x) {
        if (model.weight[x] < 1.0)
            throw WeightError("omega < 1 at state " + std::to_string(x));
        if (model.admissible[x].empty())
            throw ParamError("empty admissible set at state " + std::to_string(x));
    }

    double u_over_w_max = neg_inf;
    double u_over_w_min = std::numeric_limits<double>::infinity();
    double alpha = 0.0;

    for (std::size_t x = 0; x < S; ++x) {
        for (int a : model.admissible[x]) {
            const auto& row = model.transition[x][a];
            if (row.size() != S)
                throw ParamError("transition row size mismatch at " + at(x, a));
            double sum = 0.0, drift = 0.0;
            for (std::size_t y = 0; y < S; ++y) {
                if (row[y] < 0.0)
                    throw StochasticityError("negative transition probability at " + at(x, a));
                sum += row[y];
                drift += model.weight[y] * row[y];
            }
            if (std::abs(sum - 1.0) > row_tol)
                throw StochasticityError("transition row sums to " + std::to_string(sum) +
                                         " at " + at(x, a));
            alpha = std::max(alpha, drift / model.weight[x]);

            const double u = model.utility[x][a];
            if (is_neg_inf(u)) {
                if (mode == Mode::bounded)
                    throw BoundError("u = -inf in bounded mode at " + at(x, a));
                continue; // no lower bound tracked in unbounded mode
            }
            if (!std::isfinite(u))
                throw BoundError("non-finite utility at " + at(x, a));
            const double r = u / model.weight[x];
            u_over_w_max = std::max(u_over_w_max, r);
            u_over_w_min = std::min(u_over_w_min, r);
        }
    }

    ModelConstants mc;
    mc.alpha = alpha;
    mc.c = (u_over_w_max > 0.0) ? u_over_w_max : c_floor;
    if (mode == Mode::bounded) {
        mc.b = (u_over_w_min < 0.0) ? -u_over_w_min : c_floor;
        mc.z = std::max(mc.b, mc.c);
    } else {
        mc.b = std::numeric_limits<double>::infinity();
        mc.z = std::numeric_limits<double>::infinity();
    }
    return mc;
}

void check_policy(const StationaryPolicy& f, const FiniteModel& model) {
    if (f.size() != model.num_states())
        throw ParamError("policy size mismatch");
    for (std::size_t x = 0; x < f.size(); ++x) {
        const auto& adm = model.admissible[x];
        bool ok = false;
        for (int a : adm) ok = ok || (a == f[x]);
        if (!ok)
            throw ParamError("policy chooses inadmissible action at state " + std::to_string(x));
    }
}

} // namespace nonlin_mdp
