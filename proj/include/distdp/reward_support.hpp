#pragma once

#include "distdp/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace distdp {

/// Default cap on |S_n| for any single stage.
inline constexpr std::size_t kDefaultSupportCap = 1'000'000;

/**
 * Reachable accumulated-reward values S_0 = {0}, S_{n+1} = S_n + r_n(E, A).
 *
 * Values are held as integer ticks of 1/scale(). When every reward is a
 * ratio with denominator <= 10^6 the scale is the common denominator and
 * the support is exact; otherwise rewards are quantized to a 1e-9 grid.
 * Each S_n is sorted and deduplicated. Terminal rewards are not included.
 */
class RewardSupport {
public:
    enum class Mode { Exact, Quantized };

    Mode mode() const { return mode_; }
    std::int64_t scale() const { return scale_; }
    int horizon() const { return static_cast<int>(stages_.size()) - 1; }
    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }

    std::size_t size(int stage) const { return stages_[static_cast<std::size_t>(stage)].size(); }
    std::span<const std::int64_t> ticks(int stage) const { return stages_[static_cast<std::size_t>(stage)]; }
    double value(int stage, std::size_t index) const {
        return static_cast<double>(stages_[static_cast<std::size_t>(stage)][index]) / static_cast<double>(scale_);
    }
    std::vector<double> values(int stage) const;

    std::int64_t reward_ticks(int stage, int state, int action) const {
        return reward_ticks_[(static_cast<std::size_t>(stage) * num_states_ + state) * num_actions_ + action];
    }

    /// Index in S_{stage+1} of s + r_stage(x, a), where s is the index-th element of S_stage.
    std::size_t successor(int stage, std::size_t index, int state, int action) const {
        return successors_[static_cast<std::size_t>(stage)]
                          [(index * num_states_ + state) * num_actions_ + action];
    }

    std::optional<std::size_t> index_of(int stage, std::int64_t tick) const;
    std::optional<std::size_t> index_of_value(int stage, double value) const;

    /// Converts a real value to ticks (rounding to the nearest tick).
    std::int64_t to_ticks(double value) const;

    bool operator==(const RewardSupport& other) const {
        return scale_ == other.scale_ && stages_ == other.stages_;
    }

private:
    friend RewardSupport compute_reward_support(const MdpModel&, std::size_t);

    Mode mode_ = Mode::Exact;
    std::int64_t scale_ = 1;
    int num_states_ = 0;
    int num_actions_ = 0;
    std::vector<std::int64_t> reward_ticks_;
    std::vector<std::vector<std::int64_t>> stages_;
    std::vector<std::vector<std::size_t>> successors_;
};

/// Throws BudgetExceeded when some |S_n| exceeds `cap`.
RewardSupport compute_reward_support(const MdpModel& model, std::size_t cap = kDefaultSupportCap);

} // namespace distdp
