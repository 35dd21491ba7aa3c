#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace distdp {

/**
 * History-dependent randomized policy sigma = (sigma_0, ..., sigma_{N-1}).
 *
 * A history h_n = (x_0, a_0, x_1, ..., x_n) has length 2n+1. Each stage
 * stores a dense table over all |E|^{n+1} |A|^n histories, so this type is
 * meant for oracle-sized instances.
 */
class HistoryPolicy {
public:
    using Rule = std::function<std::vector<double>(int stage, std::span<const int> history)>;

    HistoryPolicy() = default;
    /// Uniform randomization at every history.
    HistoryPolicy(int num_states, int num_actions, int horizon);

    static HistoryPolicy from_rule(int num_states, int num_actions, int horizon, const Rule& rule);
    /// sigma_n(a | h_n) = rule(n, x_n).
    static HistoryPolicy markov(int num_states, int num_actions, int horizon,
                                const std::function<std::vector<double>(int stage, int state)>& rule);

    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }
    int horizon() const { return static_cast<int>(tables_.size()); }

    std::size_t num_histories(int stage) const;
    std::size_t history_index(std::span<const int> history) const;

    std::span<const double> probs(int stage, std::span<const int> history) const;
    std::span<double> probs(int stage, std::span<const int> history);

    std::span<const double> probs_at(int stage, std::size_t history_index) const {
        return {tables_[static_cast<std::size_t>(stage)].data() + history_index * num_actions_,
                static_cast<std::size_t>(num_actions_)};
    }
    std::span<double> probs_at(int stage, std::size_t history_index) {
        return {tables_[static_cast<std::size_t>(stage)].data() + history_index * num_actions_,
                static_cast<std::size_t>(num_actions_)};
    }

    /// First row that is not a probability distribution, if any.
    std::optional<std::string> validate() const;

private:
    int num_states_ = 0;
    int num_actions_ = 0;
    std::vector<std::vector<double>> tables_;
};

/// |E|^{n+1} |A|^n as a double (saturating), the number of histories at stage n.
double history_count(int num_states, int num_actions, int stage);

} // namespace distdp
