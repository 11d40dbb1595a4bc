#include "nonlin_mdp/random_models.hpp"

#include <random>

namespace nonlin_mdp {

namespace {
double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
} // namespace

FiniteModel make_random_model(std::uint64_t seed, const RandomModelOptions& opts) {
    std::mt19937_64 rng(seed);
    const int S = opts.n_states, A = opts.n_actions;
    FiniteModel m;
    for (int x = 0; x < S; ++x) {
        m.state_labels.push_back("s" + std::to_string(x));
        m.state_coords.push_back(static_cast<double>(x));
    }
    for (int a = 0; a < A; ++a) m.action_labels.push_back("a" + std::to_string(a));
    m.admissible.assign(S, {});
    m.transition.assign(S, std::vector<std::vector<double>>(A, std::vector<double>(S, 0.0)));
    m.utility.assign(S, std::vector<double>(A, 0.0));
    m.weight.assign(S, 1.0);

    for (int x = 0; x < S; ++x) {
        for (int a = 0; a < A; ++a) {
            if (opts.random_admissible && a > 0 && u01(rng) < 0.3) continue;
            m.admissible[x].push_back(a);
        }
        for (int a : m.admissible[x]) {
            auto& row = m.transition[x][a];
            double sum = 0.0;
            for (int y = 0; y < S; ++y) {
                row[y] = u01(rng) + 1e-3;
                sum += row[y];
            }
            double partial = 0.0;
            for (int y = 0; y < S - 1; ++y) {
                row[y] /= sum;
                partial += row[y];
            }
            row[S - 1] = 1.0 - partial; // exact row sum
            m.utility[x][a] = opts.u_lo + (opts.u_hi - opts.u_lo) * u01(rng);
        }
    }
    return m;
}

ValueTable make_random_values(std::uint64_t seed, std::size_t n_states, double lo, double hi) {
    std::mt19937_64 rng(seed);
    ValueTable v;
    v.values.reserve(n_states);
    for (std::size_t i = 0; i < n_states; ++i) v.values.push_back(lo + (hi - lo) * u01(rng));
    return v;
}

StationaryPolicy make_random_policy(std::uint64_t seed, const FiniteModel& model) {
    std::mt19937_64 rng(seed);
    StationaryPolicy f;
    f.choice.reserve(model.num_states());
    for (std::size_t x = 0; x < model.num_states(); ++x) {
        const auto& adm = model.admissible[x];
        f.choice.push_back(adm[static_cast<std::size_t>(u01(rng) * adm.size()) % adm.size()]);
    }
    return f;
}

} // namespace nonlin_mdp
