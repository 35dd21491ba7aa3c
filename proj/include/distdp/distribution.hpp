#pragma once

#include "distdp/reward_support.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace distdp {

/**
 * Distribution F(x, s) of (X_n, R_{n-1}) over E x S_n: the state of the
 * lifted decision problem. Stored densely, state-major.
 */
class JointDistribution {
public:
    JointDistribution() = default;
    /// Zero table at `stage`.
    JointDistribution(std::shared_ptr<const RewardSupport> support, int stage);

    /// F_0 = nu (x) delta_0.
    static JointDistribution initial(std::shared_ptr<const RewardSupport> support,
                                     std::span<const double> nu);

    int stage() const { return stage_; }
    int num_states() const { return num_states_; }
    std::size_t num_rewards() const { return num_rewards_; }
    const RewardSupport& support() const { return *support_; }
    const std::shared_ptr<const RewardSupport>& support_ptr() const { return support_; }

    double operator()(int x, std::size_t s) const { return mass_[static_cast<std::size_t>(x) * num_rewards_ + s]; }
    double& operator()(int x, std::size_t s) { return mass_[static_cast<std::size_t>(x) * num_rewards_ + s]; }

    std::span<const double> data() const { return mass_; }
    std::span<double> data() { return mass_; }

    double total() const;
    /// F(x, S).
    std::vector<double> state_marginal() const;
    /// F(E, s).
    std::vector<double> reward_marginal() const;
    /// Sum_{x,s} s F(x,s).
    double mean_reward() const;

    /// Largest entrywise difference; throws ShapeError on mismatched stage or support.
    double max_abs_diff(const JointDistribution& other) const;

private:
    std::shared_ptr<const RewardSupport> support_;
    int stage_ = 0;
    int num_states_ = 0;
    std::size_t num_rewards_ = 0;
    std::vector<double> mass_;
};

/// A kernel pi(a | x, s) over E x S_n, the action of the lifted problem.
class KernelAction {
public:
    KernelAction() = default;
    /// Uniform kernel.
    KernelAction(int num_states, std::size_t num_rewards, int num_actions);
    /// Deterministic kernel choosing `action` everywhere.
    static KernelAction constant(int num_states, std::size_t num_rewards, int num_actions, int action);

    int num_states() const { return num_states_; }
    std::size_t num_rewards() const { return num_rewards_; }
    int num_actions() const { return num_actions_; }

    std::span<const double> row(int x, std::size_t s) const {
        return {probs_.data() + row_offset(x, s), static_cast<std::size_t>(num_actions_)};
    }
    std::span<double> row(int x, std::size_t s) {
        return {probs_.data() + row_offset(x, s), static_cast<std::size_t>(num_actions_)};
    }
    void set_deterministic(int x, std::size_t s, int action);

    std::span<const double> data() const { return probs_; }

    /// True if each row is a point mass.
    bool is_deterministic() const;
    std::optional<std::string> validate() const;

private:
    std::size_t row_offset(int x, std::size_t s) const {
        return (static_cast<std::size_t>(x) * num_rewards_ + s) * static_cast<std::size_t>(num_actions_);
    }

    int num_states_ = 0;
    std::size_t num_rewards_ = 0;
    int num_actions_ = 0;
    std::vector<double> probs_;
};

/// (pi_0, ..., pi_{N-1}); the stage-n kernel is indexed by S_n.
using LiftedActionSequence = std::vector<KernelAction>;

} // namespace distdp
