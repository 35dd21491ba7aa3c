#include "test_support.hpp"

#include "distdp/enumeration.hpp"
#include "distdp/errors.hpp"
#include "distdp/infinite_horizon.hpp"
#include "distdp/reward_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

using namespace distdp;

namespace {

// F({s*}) with s* the support point of the last stage nearest to sqrt(2)/2.
ObjectiveFunctional nearest_point_mass() {
    return ObjectiveFunctional::custom(
        [](const JointDistribution& F, const MdpModel&) {
            const auto values = F.support().values(F.stage());
            std::size_t best = 0;
            for (std::size_t i = 1; i < values.size(); ++i)
                if (std::abs(values[i] - std::sqrt(0.5)) < std::abs(values[best] - std::sqrt(0.5)))
                    best = i;
            return F.reward_marginal()[best];
        },
        Regularity{true, std::nullopt}, Sense::Maximize, "point_mass");
}

std::vector<int> played_actions(const SolveReport& rep) {
    std::vector<int> actions;
    for (std::size_t n = 0; n < rep.actions.size(); ++n) {
        const auto& F = rep.trajectory[n];
        for (std::size_t s = 0; s < F.num_rewards(); ++s)
            if (F(0, s) > 0.0) {
                auto row = rep.actions[n].row(0, s);
                actions.push_back(row[1] > row[0] ? 1 : 0);
            }
    }
    return actions;
}

} // namespace

TEST_CASE("discounted model: one stage keeps r, terminal is zero") {
    auto base = MdpModel::stationary(2, 2, 5, {1, -2, 0.5, 3}, {7, 8}, {1, 0, 0, 1, 0, 1, 1, 0}, {1, 0});
    auto m = build_discounted_model(base, 0.3, 1);
    CHECK(m.horizon == 1);
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a)
            CHECK(m.reward(0, x, a) == base.reward(0, x, a));
    CHECK(m.terminal == std::vector<double>{0, 0});
}

TEST_CASE("dyadic example: r_k(0,1) = (1/2)^(k+1)") {
    auto m = build_discounted_model(dyadic_example_model(1), 0.5, 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(m.reward(k, 0, 1) == std::ldexp(1.0, -(k + 1)));
        CHECK(m.reward(k, 0, 0) == 0.0);
    }
}

TEST_CASE("discounted support reaches sum beta^k M") {
    testgen::Rng rng(60);
    for (int trial = 0; trial < 20; ++trial) {
        auto base = testgen::random_model(rng, {3, 2, 1, false});
        for (auto& r : base.rewards)
            r = std::abs(r);
        const double beta = trial % 2 ? 0.5 : 0.25;
        const int n = testgen::uniform_int(rng, 1, 5);
        auto m = build_discounted_model(base, beta, n);
        auto S = compute_reward_support(m);
        double want = 0.0;
        for (int k = 0; k < n; ++k)
            want += std::pow(beta, k) * base.reward_bound();
        CHECK(S.values(n).back() == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("discounted model errors") {
    auto base = dyadic_example_model(2);
    CHECK_THROWS_AS(build_discounted_model(base, 1.0, 2), ValidationError);
    CHECK_THROWS_AS(build_discounted_model(base, 0.0, 2), ValidationError);
    CHECK_THROWS_AS(build_discounted_model(base, 0.5, 0), ValidationError);
    base.reward(1, 0, 1) = 0.25;
    CHECK_THROWS_AS(build_discounted_model(base, 0.5, 2), ValidationError);
}

TEST_CASE("truncation bound") {
    for (int m = 0; m < 10; ++m)
        CHECK(truncation_bound({0.7, 3.0, 0.0}, m) == 0.0);
    for (int m = 0; m < 20; ++m)
        CHECK(truncation_bound({0.5, 0.5, 1.0}, m) == std::ldexp(1.0, -(m + 1)));
    for (double beta : {0.5, 0.25, 0.125}) {
        const DiscountSpec spec{beta, 2.0, 1.5};
        for (int m = 0; m < 10; ++m) {
            CHECK(truncation_bound(spec, m) / truncation_bound(spec, m + 1) == doctest::Approx(1 / beta).epsilon(1e-15));
            CHECK(truncation_bound(spec, m + 1) < truncation_bound(spec, m));
        }
    }
    CHECK_THROWS_AS(truncation_bound({1.5, 1, 1}, 0), ValidationError);
    CHECK_THROWS_AS(truncation_bound({0.5, -1, 1}, 0), ValidationError);
}

TEST_CASE("realized truncation gaps respect the bound for the mean") {
    testgen::Rng rng(61);
    const auto H = ObjectiveFunctional::mean_reward();
    for (int trial = 0; trial < 20; ++trial) {
        auto base = testgen::random_model(rng, {2, 2, 1, false});
        const double beta = trial % 2 ? 0.9 : 0.5;
        auto m = build_discounted_model(base, beta, 6);
        auto S = std::make_shared<const RewardSupport>(compute_reward_support(m));
        const DiscountSpec spec{beta, base.reward_bound(), 1.0};
        for (int p = 0; p < 5; ++p) {
            auto sigma = testgen::random_history_policy(rng, m);
            std::vector<double> h;
            for (int j = 1; j <= 6; ++j)
                h.push_back(H.evaluate(exact_joint_distribution(m, sigma, j, S), m));
            for (int mm = 0; mm < 6; ++mm)
                for (int n = mm + 1; n < 6; ++n)
                    CHECK(std::abs(h[static_cast<std::size_t>(n)] - h[static_cast<std::size_t>(mm)]) <=
                          truncation_bound(spec, mm) + 1e-12);
        }
    }
}

TEST_CASE("solve_to_tolerance: a loose tolerance needs one stage") {
    auto base = dyadic_example_model(1);
    const double beta = 0.5;
    const double loose = 1.0 * base.reward_bound() * beta / (1 - beta);
    auto rep = solve_to_tolerance(base, ObjectiveFunctional::mean_reward(), beta, loose);
    CHECK(rep.stages == 1);
    CHECK(rep.reached_epsilon);
    CHECK(rep.truncation_gap <= loose);
}

TEST_CASE("solve_to_tolerance: the dyadic mean converges to 1") {
    auto base = dyadic_example_model(1);
    double prev = 0.0, prev_eps = 0.0;
    for (double eps : {1e-2, 5e-3, 1e-4}) {
        auto rep = solve_to_tolerance(base, ObjectiveFunctional::mean_reward(), 0.5, eps);
        CHECK(rep.certified);
        CHECK(std::abs(rep.solve.value - 1.0) <= eps);
        CHECK(rep.truncation_gap <= eps);
        if (prev > 0.0)
            CHECK(std::abs(rep.solve.value - prev) <= prev_eps + eps + 1e-12);
        prev = rep.solve.value;
        prev_eps = eps;
        // smallest horizon with bound(N-1) <= eps
        CHECK(truncation_bound({0.5, 0.5, 1.0}, rep.stages - 1) <= eps);
        if (rep.stages > 1)
            CHECK(truncation_bound({0.5, 0.5, 1.0}, rep.stages - 2) > eps);
    }
}

TEST_CASE("solve_to_tolerance reports the achievable tolerance when the support overflows") {
    auto base = MdpModel::stationary(1, 3, 1, {0.0, 1.0, 1.0 / 3.0}, {0}, {1, 1, 1}, {1});
    SolverOptions opt;
    opt.support_cap = 40;
    auto rep = solve_to_tolerance(base, ObjectiveFunctional::mean_reward(), 0.5, 1e-9, opt);
    CHECK_FALSE(rep.reached_epsilon);
    CHECK(rep.truncation_gap > 1e-9);
    CHECK(rep.stages >= 1);
}

TEST_CASE("solve_to_tolerance needs a Lipschitz objective") {
    auto base = dyadic_example_model(1);
    CHECK_THROWS_AS(solve_to_tolerance(base, ObjectiveFunctional::threshold(0.5), 0.5, 0.1), ValidationError);
    CHECK_THROWS_AS(solve_to_tolerance(base, ObjectiveFunctional::mean_reward(), 0.5, 0.0), ValidationError);
}

TEST_CASE("dyadic policy examples") {
    CHECK(dyadic_policy(0.0, 6) == std::vector<int>(6, 0));
    CHECK(dyadic_partial_sum(dyadic_policy(0.0, 6)) == 0.0);
    CHECK(dyadic_policy(std::sqrt(0.5), 4) == std::vector<int>{1, 0, 1, 1});
    CHECK(dyadic_partial_sum({1, 0, 1, 1}) == 0.6875);
    CHECK(dyadic_policy(1.0, 5) == std::vector<int>(5, 1));
    CHECK(dyadic_partial_sum(std::vector<int>(5, 1)) == 1.0 - std::ldexp(1.0, -5));
    CHECK_THROWS_AS(dyadic_policy(1.5, 3), ValidationError);
}

TEST_CASE("dyadic policy error stays within 2^-n") {
    testgen::Rng rng(62);
    for (int trial = 0; trial < 200; ++trial) {
        const double target = trial == 0 ? std::sqrt(0.5) : testgen::uniform01(rng);
        for (int n = 0; n <= 30; ++n) {
            const double err = std::abs(dyadic_partial_sum(dyadic_policy(target, n)) - target);
            CHECK(err <= std::ldexp(1.0, -n));
        }
    }
}

TEST_CASE("point-mass objective at sqrt(2)/2 has non-constant optimal sequences") {
    SolverOptions opt;
    opt.strategy = Strategy::Exhaustive;
    // deterministic kernels keep the trajectory a point mass, so memoization stays small
    opt.exhaustive_budget = 1e300;
    auto at3 = lifted_value_iteration(build_discounted_model(dyadic_example_model(1), 0.5, 3), nearest_point_mass(), opt);
    CHECK(at3.value == 1.0);
    CHECK(played_actions(at3) == std::vector<int>{1, 1, 0});
    auto at4 = lifted_value_iteration(build_discounted_model(dyadic_example_model(1), 0.5, 4), nearest_point_mass(), opt);
    CHECK(at4.value == 1.0);
    CHECK(played_actions(at4) == std::vector<int>{1, 0, 1, 1});
    for (int n = 3; n <= 6; ++n) {
        auto rep = lifted_value_iteration(build_discounted_model(dyadic_example_model(1), 0.5, n), nearest_point_mass(), opt);
        auto acts = played_actions(rep);
        REQUIRE(acts.size() == static_cast<std::size_t>(n));
        CHECK(std::adjacent_find(acts.begin(), acts.end(), std::not_equal_to<>()) != acts.end());
    }
}
