#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace distdp {

/**
 * Finite-horizon Markov decision model with stage-dependent rewards.
 *
 * Tables are stored densely in row-major order:
 *  - reward:     [stage][state][action]
 *  - transition: [state][action][next state]
 *
 * States optionally carry a numeric position (used by distance objectives);
 * the default embedding is the state index.
 */
struct MdpModel {
    int num_states = 0;
    int num_actions = 0;
    int horizon = 0;
    std::vector<double> rewards;
    std::vector<double> terminal;
    std::vector<double> transitions;
    std::vector<double> initial;
    std::vector<double> positions;

    /// Builds a model whose reward table is repeated for every stage.
    /// `stage_reward` is indexed [state][action].
    static MdpModel stationary(int num_states, int num_actions, int horizon,
                               std::vector<double> stage_reward,
                               std::vector<double> terminal,
                               std::vector<double> transitions,
                               std::vector<double> initial);

    double reward(int stage, int state, int action) const {
        return rewards[(static_cast<std::size_t>(stage) * num_states + state) * num_actions + action];
    }
    double& reward(int stage, int state, int action) {
        return rewards[(static_cast<std::size_t>(stage) * num_states + state) * num_actions + action];
    }

    double prob(int state, int action, int next) const {
        return transitions[(static_cast<std::size_t>(state) * num_actions + action) * num_states + next];
    }
    double& prob(int state, int action, int next) {
        return transitions[(static_cast<std::size_t>(state) * num_actions + action) * num_states + next];
    }

    std::span<const double> transition_row(int state, int action) const {
        return {transitions.data() + (static_cast<std::size_t>(state) * num_actions + action) * num_states,
                static_cast<std::size_t>(num_states)};
    }

    double position(int state) const {
        return positions.empty() ? static_cast<double>(state) : positions[static_cast<std::size_t>(state)];
    }

    /// M = max |r_n(x,a)| over all stages, states and actions.
    double reward_bound() const;

    /// True when r_n does not depend on n.
    bool has_stationary_rewards() const;
};

/// Returns the first violated invariant as a message, or nullopt if the model
/// is valid.
std::optional<std::string> validate_model(const MdpModel& model);

/// Throws ValidationError with the validate_model message.
void require_valid(const MdpModel& model);

} // namespace distdp
