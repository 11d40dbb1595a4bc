#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "nonlin_mdp/oracle.hpp"
#include "nonlin_mdp/random_models.hpp"
#include "nonlin_mdp/solver.hpp"

using namespace nonlin_mdp;
using test_helpers::dense_model;
using test_helpers::self_loop;

TEST_CASE("history-tree evaluation") {
    auto m = make_random_model(101, {2, 2, -1.0, 1.0, false});
    auto d = make_log_blend(0.5, LogBlendVariant::one);
    SUBCASE("one stage returns the stage utility") {
        auto f = make_random_policy(1, m);
        auto hp = oracle::HistoryPolicy::from_markov(f);
        for (int x0 = 0; x0 < 2; ++x0)
            CHECK(oracle::enumerate_histories_Un(m, d, hp, 1, x0) ==
                  doctest::Approx(m.utility[x0][f[x0]]).epsilon(1e-15));
    }
    SUBCASE("three stages match the table-sweep composition") {
        std::vector<StationaryPolicy> seq = {make_random_policy(11, m), make_random_policy(12, m),
                                             make_random_policy(13, m)};
        auto hp = oracle::HistoryPolicy::from_markov_seq(seq);
        auto w = evaluate_finite_horizon(m, d, seq, 3);
        for (int x0 = 0; x0 < 2; ++x0)
            CHECK(std::abs(oracle::enumerate_histories_Un(m, d, hp, 3, x0) - w[x0]) <= 1e-12);
    }
    SUBCASE("a history-dependent rule escapes every Markov policy pair") {
        // every transition lands in state 0, where the two actions pay 1 and 2;
        // the second-stage rule conditions on the *start* state, which no
        // Markov stage policy can see
        auto m2 = dense_model({{1.0, 2.0}, {0.0, 0.0}},
                              {{{1.0, 0.0}, {1.0, 0.0}}, {{1.0, 0.0}, {1.0, 0.0}}});
        auto d2 = make_linear(0.9);
        oracle::HistoryPolicy hp([](const oracle::History& h) {
            if (h.states.size() == 1) return 0;
            return h.states[0] == 0 ? 0 : 1;
        });
        std::vector<double> u_hist(2);
        for (int x0 = 0; x0 < 2; ++x0)
            u_hist[x0] = oracle::enumerate_histories_Un(m2, d2, hp, 2, x0);
        double best_match = 1e300; // closest Markov pair, max-abs over starts
        for (int a0 : {0, 1})
            for (int a1 : {0, 1})
                for (int b0 : {0, 1})
                    for (int b1 : {0, 1}) {
                        std::vector<StationaryPolicy> seq = {StationaryPolicy{{a0, a1}},
                                                             StationaryPolicy{{b0, b1}}};
                        auto w = evaluate_finite_horizon(m2, d2, seq, 2);
                        const double gap = std::max(std::abs(w[0] - u_hist[0]),
                                                    std::abs(w[1] - u_hist[1]));
                        best_match = std::min(best_match, gap);
                    }
        CHECK(best_match >= 0.9 - 1e-12); // margin delta(2) - delta(1)
    }
    SUBCASE("tree-size guard") {
        auto big = make_random_model(7, {12, 6, -1.0, 1.0, false});
        auto hp = oracle::HistoryPolicy::from_markov(make_random_policy(1, big));
        CHECK_THROWS_AS(oracle::enumerate_histories_Un(big, make_linear(0.5), hp, 8, 0),
                        TreeTooLarge);
    }
}

TEST_CASE("path-aggregated evaluation") {
    SUBCASE("one stage applies no discounting") {
        auto m = make_random_model(103, {3, 2, -1.0, 1.0, false});
        auto d = make_sign_effect(0.5, 0.9);
        auto f = make_random_policy(2, m);
        auto hp = oracle::HistoryPolicy::from_markov(f);
        for (int x0 = 0; x0 < 3; ++x0)
            CHECK(oracle::pathwise_Rn(m, d, hp, 1, x0) ==
                  doctest::Approx(m.utility[x0][f[x0]]).epsilon(1e-15));
    }
    SUBCASE("coincides with the recursive aggregation for linear discounting") {
        auto m = make_random_model(107, {3, 2, -1.0, 1.0, false});
        auto d = make_linear(0.9);
        auto f = make_random_policy(5, m);
        auto hp = oracle::HistoryPolicy::from_markov(f);
        for (int x0 = 0; x0 < 3; ++x0)
            CHECK(std::abs(oracle::pathwise_Rn(m, d, hp, 4, x0) -
                           oracle::enumerate_histories_Un(m, d, hp, 4, x0)) <= 1e-12);
    }
    SUBCASE("diverges from the recursive aggregation for sign-effect discounting") {
        // utilities chosen so continuation arguments straddle zero, where the
        // piecewise-linear discount actually bends
        auto m = dense_model({{1.5, -1.0}, {-1.0, 1.0}},
                             {{{0.5, 0.5}, {0.3, 0.7}}, {{0.5, 0.5}, {0.7, 0.3}}});
        auto d = make_sign_effect(0.2, 0.9);
        auto f = StationaryPolicy{{0, 0}};
        auto hp = oracle::HistoryPolicy::from_markov(f);
        double max_gap = 0.0;
        for (int x0 = 0; x0 < 2; ++x0)
            max_gap = std::max(max_gap,
                               std::abs(oracle::pathwise_Rn(m, d, hp, 3, x0) -
                                        oracle::enumerate_histories_Un(m, d, hp, 3, x0)));
        CHECK(max_gap > 1e-6);
    }
}

TEST_CASE("classical discounted value iteration") {
    SUBCASE("unit utility self-loop") {
        auto ref = oracle::classical_discounted_VI(self_loop(1.0), 0.5, 1e-12);
        CHECK(ref.value[0] == doctest::Approx(2.0).epsilon(1e-10));
    }
    SUBCASE("zero utility") {
        auto m = make_random_model(5, {4, 2, 0.0, 0.0, false});
        auto ref = oracle::classical_discounted_VI(m, 0.9, 1e-12);
        for (int x = 0; x < 4; ++x) CHECK(std::abs(ref.value[x]) <= 1e-12);
    }
    SUBCASE("agrees with the solver under a linear discount") {
        auto m = make_random_model(109, {10, 4, -1.0, 1.0, false});
        auto ref = oracle::classical_discounted_VI(m, 0.9, 1e-10);
        auto rep = value_iterate(m, make_linear(0.9), 1e-10, 100000);
        CHECK(weighted_diff(ref.value, rep.value, m) <= 1e-8);
    }
}
