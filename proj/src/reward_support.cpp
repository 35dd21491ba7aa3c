#include "distdp/reward_support.hpp"

#include "distdp/errors.hpp"
#include "distdp/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace distdp {

namespace {

constexpr std::int64_t kMaxRewardDenominator = 1'000'000;
constexpr std::int64_t kMaxCommonDenominator = 1'000'000'000'000LL;
constexpr std::int64_t kQuantizedScale = 1'000'000'000LL;
// Keep accumulated sums comfortably inside int64.
constexpr double kTickLimit = 4e18;

} // namespace

std::vector<double> RewardSupport::values(int stage) const {
    std::vector<double> out;
    out.reserve(size(stage));
    for (std::size_t i = 0; i < size(stage); ++i)
        out.push_back(value(stage, i));
    return out;
}

std::optional<std::size_t> RewardSupport::index_of(int stage, std::int64_t tick) const {
    const auto& s = stages_[static_cast<std::size_t>(stage)];
    auto it = std::lower_bound(s.begin(), s.end(), tick);
    if (it == s.end() || *it != tick)
        return std::nullopt;
    return static_cast<std::size_t>(it - s.begin());
}

std::optional<std::size_t> RewardSupport::index_of_value(int stage, double value) const {
    return index_of(stage, to_ticks(value));
}

std::int64_t RewardSupport::to_ticks(double value) const {
    return std::llround(value * static_cast<double>(scale_));
}

RewardSupport compute_reward_support(const MdpModel& model, std::size_t cap) {
    require_valid(model);
    RewardSupport sup;
    sup.num_states_ = model.num_states;
    sup.num_actions_ = model.num_actions;

    // Try exact rational ticks first.
    std::int64_t scale = 1;
    bool exact = true;
    std::vector<Fraction> fractions;
    fractions.reserve(model.rewards.size());
    for (double r : model.rewards) {
        auto f = rationalize(r, kMaxRewardDenominator);
        if (!f) {
            exact = false;
            break;
        }
        auto l = bounded_lcm(scale, f->den, kMaxCommonDenominator);
        if (!l) {
            exact = false;
            break;
        }
        scale = *l;
        fractions.push_back(*f);
    }
    const double horizon_bound = static_cast<double>(model.horizon) * model.reward_bound();
    if (exact && horizon_bound * static_cast<double>(scale) > kTickLimit)
        exact = false;

    if (exact) {
        sup.mode_ = RewardSupport::Mode::Exact;
        sup.scale_ = scale;
        sup.reward_ticks_.reserve(fractions.size());
        for (const auto& f : fractions)
            sup.reward_ticks_.push_back(f.num * (scale / f.den));
    } else {
        sup.mode_ = RewardSupport::Mode::Quantized;
        sup.scale_ = kQuantizedScale;
        if (horizon_bound * static_cast<double>(kQuantizedScale) > kTickLimit)
            throw BudgetExceeded("accumulated rewards too large to represent on the 1e-9 grid");
        sup.reward_ticks_.reserve(model.rewards.size());
        for (double r : model.rewards)
            sup.reward_ticks_.push_back(std::llround(r * static_cast<double>(kQuantizedScale)));
    }

    const auto E = static_cast<std::size_t>(model.num_states);
    const auto A = static_cast<std::size_t>(model.num_actions);
    sup.stages_.push_back({0});
    for (int n = 0; n < model.horizon; ++n) {
        const auto& cur = sup.stages_.back();
        std::vector<std::int64_t> next;
        next.reserve(cur.size() * E * A);
        for (std::int64_t s : cur)
            for (std::size_t x = 0; x < E; ++x)
                for (std::size_t a = 0; a < A; ++a)
                    next.push_back(s + sup.reward_ticks(n, static_cast<int>(x), static_cast<int>(a)));
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (next.size() > cap)
            throw BudgetExceeded("reward support at stage " + std::to_string(n + 1) + " has " +
                                 std::to_string(next.size()) + " values (cap " + std::to_string(cap) + ")");

        std::vector<std::size_t> succ(cur.size() * E * A);
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t x = 0; x < E; ++x)
                for (std::size_t a = 0; a < A; ++a) {
                    const std::int64_t t = cur[i] + sup.reward_ticks(n, static_cast<int>(x), static_cast<int>(a));
                    auto it = std::lower_bound(next.begin(), next.end(), t);
                    succ[(i * E + x) * A + a] = static_cast<std::size_t>(it - next.begin());
                }
        sup.successors_.push_back(std::move(succ));
        sup.stages_.push_back(std::move(next));
    }
    return sup;
}

} // namespace distdp
