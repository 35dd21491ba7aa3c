#include "test_support.hpp"

#include "distdp/enumeration.hpp"
#include "distdp/errors.hpp"
#include "distdp/rational.hpp"
#include "distdp/reward_support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <set>

using namespace distdp;

namespace {

MdpModel identity_model() {
    return MdpModel::stationary(1, 1, 1, {0.0}, {0.0}, {1.0}, {1.0});
}

// Every sum of rewards r_0(x_0,a_0) + ... + r_{n-1}(x_{n-1},a_{n-1}).
std::set<long long> path_sums(const MdpModel& m, int n, long long scale) {
    std::set<long long> out{0};
    for (int k = 0; k < n; ++k) {
        std::set<long long> next;
        for (long long s : out)
            for (int x = 0; x < m.num_states; ++x)
                for (int a = 0; a < m.num_actions; ++a)
                    next.insert(s + std::llround(m.reward(k, x, a) * static_cast<double>(scale)));
        out = std::move(next);
    }
    return out;
}

} // namespace

TEST_CASE("rationalize recovers small fractions") {
    auto half = rationalize(0.5, 1'000'000);
    REQUIRE(half);
    CHECK(half->num == 1);
    CHECK(half->den == 2);

    auto third = rationalize(1.0 / 3.0, 1'000'000);
    REQUIRE(third);
    CHECK(third->num == 1);
    CHECK(third->den == 3);

    auto neg = rationalize(-7.0 / 8.0, 1'000'000);
    REQUIRE(neg);
    CHECK(neg->num == -7);
    CHECK(neg->den == 8);

    CHECK_FALSE(rationalize(std::sqrt(2.0), 1'000'000));
    CHECK_FALSE(rationalize(std::numeric_limits<double>::infinity(), 10));
}

TEST_CASE("bounded_lcm") {
    CHECK(bounded_lcm(4, 6, 100) == 12);
    CHECK_FALSE(bounded_lcm(999'983, 999'979, 1'000'000));
}

TEST_CASE("validate_model accepts the identity chain") {
    CHECK_FALSE(validate_model(identity_model()));
}

TEST_CASE("validate_model reports a short transition row") {
    auto m = identity_model();
    m.transitions[0] = 0.9;
    auto err = validate_model(m);
    REQUIRE(err);
    CHECK(err->find("row sum 0.9") != std::string::npos);
    CHECK_THROWS_AS(require_valid(m), ValidationError);
}

TEST_CASE("validate_model reports a non-finite reward") {
    auto m = identity_model();
    m.rewards[0] = std::numeric_limits<double>::infinity();
    auto err = validate_model(m);
    REQUIRE(err);
    CHECK(err->find("non-finite reward") != std::string::npos);
}

TEST_CASE("validate_model reports a negative probability and a bad initial law") {
    auto m = MdpModel::stationary(2, 1, 1, {0, 0}, {0, 0}, {1.5, -0.5, 0, 1}, {1, 0});
    auto err = validate_model(m);
    REQUIRE(err);
    CHECK(err->find("q(.|0,0)") != std::string::npos);

    auto m2 = MdpModel::stationary(2, 1, 1, {0, 0}, {0, 0}, {1, 0, 0, 1}, {0.5, 0.4});
    auto err2 = validate_model(m2);
    REQUIRE(err2);
    CHECK(err2->find("initial") != std::string::npos);
}

TEST_CASE("reward bound and stationarity") {
    auto m = MdpModel::stationary(1, 2, 3, {0.5, -2.0}, {7.0}, {1, 1}, {1});
    CHECK(m.reward_bound() == 2.0);
    CHECK(m.has_stationary_rewards());
    m.reward(2, 0, 1) = 1.0;
    CHECK_FALSE(m.has_stationary_rewards());
}

TEST_CASE("zero rewards give S_n = {0}") {
    auto m = MdpModel::stationary(2, 2, 4, {0, 0, 0, 0}, {1, 2}, {1, 0, 0, 1, 0, 1, 1, 0}, {1, 0});
    auto S = compute_reward_support(m);
    for (int n = 0; n <= 4; ++n) {
        REQUIRE(S.size(n) == 1);
        CHECK(S.value(n, 0) == 0.0);
    }
}

TEST_CASE("two reward bits over two stages give {0,1,2}") {
    auto m = MdpModel::stationary(1, 2, 2, {0, 1}, {0}, {1, 1}, {1});
    auto S = compute_reward_support(m);
    CHECK(S.values(2) == std::vector<double>{0, 1, 2});
    CHECK(S.mode() == RewardSupport::Mode::Exact);
    // terminal reward does not enter the support
    m.terminal[0] = 10.0;
    CHECK(compute_reward_support(m).values(2) == std::vector<double>{0, 1, 2});
}

TEST_CASE("reward support equals explicit path sums on random rational models") {
    testgen::Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        auto m = testgen::random_model(rng, {3, 3, 3, true});
        auto S = compute_reward_support(m);
        for (int n = 0; n <= m.horizon; ++n) {
            auto expect = path_sums(m, n, S.scale());
            auto ticks = S.ticks(n);
            REQUIRE(ticks.size() == expect.size());
            CHECK(std::equal(ticks.begin(), ticks.end(), expect.begin()));
            CHECK(S.size(n) <= (n == 0 ? 1 : S.size(n - 1) * m.num_states * m.num_actions));
        }
    }
}

TEST_CASE("irrational rewards fall back to a quantized grid") {
    auto m = MdpModel::stationary(1, 2, 2, {0.0, std::sqrt(2.0)}, {0}, {1, 1}, {1});
    auto S = compute_reward_support(m);
    CHECK(S.mode() == RewardSupport::Mode::Quantized);
    REQUIRE(S.size(2) == 3);
    CHECK(S.value(2, 2) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("support cap is enforced") {
    auto m = MdpModel::stationary(1, 2, 20, {0.0, 1.0 / 3.0}, {0}, {1, 1}, {1});
    CHECK_NOTHROW(compute_reward_support(m));
    auto big = MdpModel::stationary(1, 3, 12, {0.0, 1.0, 1.0 / 1024.0}, {0}, {1, 1, 1}, {1});
    CHECK_THROWS_AS(compute_reward_support(big, 50), BudgetExceeded);
}

TEST_CASE("exact joint distribution: deterministic chain") {
    // q(2|1,u) = 1, r_0(1,u) = 1, nu = delta_1 (0-based: state 0 -> 1)
    auto m = MdpModel::stationary(2, 1, 1, {1.0, 0.0}, {0, 0}, {0, 1, 0, 1}, {1, 0});
    HistoryPolicy sigma(2, 1, 1);
    auto F = exact_joint_distribution(m, sigma, 1);
    auto s1 = F.support().index_of_value(1, 1.0);
    REQUIRE(s1);
    CHECK(F(1, *s1) == 1.0);
    CHECK(F.total() == doctest::Approx(1.0));
}

TEST_CASE("exact joint distribution: fair coin") {
    auto m = MdpModel::stationary(1, 2, 1, {0.0, 1.0}, {0}, {1, 1}, {1});
    HistoryPolicy sigma(1, 2, 1);
    auto F = exact_joint_distribution(m, sigma, 1);
    REQUIRE(F.num_rewards() == 2);
    CHECK(F(0, 0) == 0.5);
    CHECK(F(0, 1) == 0.5);
}

TEST_CASE("exact joint distribution rejects stages outside 1..N") {
    auto m = MdpModel::stationary(1, 2, 2, {0.0, 1.0}, {0}, {1, 1}, {1});
    HistoryPolicy sigma(1, 2, 2);
    CHECK_THROWS_AS(exact_joint_distribution(m, sigma, 0), ShapeError);
    CHECK_THROWS_AS(exact_joint_distribution(m, sigma, 3), ShapeError);
}

TEST_CASE("path enumeration refuses instances above the cap") {
    auto m = MdpModel::stationary(1, 2, 10, {0.0, 1.0}, {0}, {1, 1}, {1});
    HistoryPolicy sigma(1, 2, 10);
    CHECK_THROWS_AS(exact_joint_distribution(m, sigma, 10, nullptr, 100.0), BudgetExceeded);
}

TEST_CASE("exact joint distribution is a distribution supported on E x S_n") {
    testgen::Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        auto m = testgen::random_model(rng, {3, 2, 3, true});
        auto sigma = testgen::random_history_policy(rng, m);
        auto S = std::make_shared<const RewardSupport>(compute_reward_support(m));
        for (int n = 1; n <= m.horizon; ++n) {
            auto F = exact_joint_distribution(m, sigma, n, S);
            CHECK(F.num_rewards() == S->size(n));
            CHECK(std::abs(F.total() - 1.0) <= 1e-12);
            for (double v : F.data())
                CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("exact joint distribution agrees with Monte Carlo sampling") {
    testgen::Rng rng(2024);
    auto m = testgen::random_model_fixed(rng, 2, 2, 3);
    auto sigma = testgen::random_history_policy(rng, m, 0.0);
    auto S = std::make_shared<const RewardSupport>(compute_reward_support(m));
    auto F = exact_joint_distribution(m, sigma, 3, S);

    auto draw = [&](std::span<const double> p) {
        double u = testgen::uniform01(rng), acc = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            acc += p[i];
            if (u < acc)
                return static_cast<int>(i);
        }
        return static_cast<int>(p.size()) - 1;
    };
    const int samples = 100'000;
    std::map<std::pair<int, std::size_t>, int> counts;
    for (int k = 0; k < samples; ++k) {
        std::vector<int> h{draw(m.initial)};
        double s = 0.0;
        for (int n = 0; n < 3; ++n) {
            const int x = h.back();
            const int a = draw(sigma.probs(n, h));
            s += m.reward(n, x, a);
            h.push_back(a);
            h.push_back(draw(m.transition_row(x, a)));
        }
        auto idx = S->index_of_value(3, s);
        REQUIRE(idx);
        ++counts[{h.back(), *idx}];
    }
    for (int x = 0; x < 2; ++x)
        for (std::size_t s = 0; s < F.num_rewards(); ++s) {
            const double p = F(x, s);
            const double freq = counts[{x, s}] / static_cast<double>(samples);
            const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / samples);
            CHECK(std::abs(freq - p) <= 3 * se + 1e-12);
        }
}

TEST_CASE("history policy indexing and validation") {
    HistoryPolicy p(2, 3, 2);
    CHECK(p.num_histories(0) == 2);
    CHECK(p.num_histories(1) == 12);
    CHECK(history_count(2, 3, 1) == 12.0);
    std::vector<int> h{1, 2, 0};
    auto row = p.probs(1, h);
    CHECK(row.size() == 3);
    CHECK(row[0] == doctest::Approx(1.0 / 3));
    CHECK_FALSE(p.validate());
    row[0] = 0.9;
    CHECK(p.validate());
}
