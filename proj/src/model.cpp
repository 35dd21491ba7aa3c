#include "distdp/model.hpp"

#include "distdp/errors.hpp"

#include <cmath>
#include <sstream>

namespace distdp {

MdpModel MdpModel::stationary(int num_states, int num_actions, int horizon,
                              std::vector<double> stage_reward,
                              std::vector<double> terminal,
                              std::vector<double> transitions,
                              std::vector<double> initial) {
    MdpModel m;
    m.num_states = num_states;
    m.num_actions = num_actions;
    m.horizon = horizon;
    m.rewards.reserve(stage_reward.size() * static_cast<std::size_t>(horizon > 0 ? horizon : 0));
    for (int n = 0; n < horizon; ++n)
        m.rewards.insert(m.rewards.end(), stage_reward.begin(), stage_reward.end());
    m.terminal = std::move(terminal);
    m.transitions = std::move(transitions);
    m.initial = std::move(initial);
    return m;
}

double MdpModel::reward_bound() const {
    double bound = 0.0;
    for (double r : rewards)
        bound = std::max(bound, std::abs(r));
    return bound;
}

bool MdpModel::has_stationary_rewards() const {
    const std::size_t stage_size = static_cast<std::size_t>(num_states) * num_actions;
    for (std::size_t i = stage_size; i < rewards.size(); ++i)
        if (rewards[i] != rewards[i % stage_size])
            return false;
    return true;
}

namespace {

std::optional<std::string> check_distribution(std::span<const double> p, const std::string& what) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i]) || p[i] < 0.0) {
            std::ostringstream os;
            os << what << ": negative or non-finite probability " << p[i] << " at index " << i;
            return os.str();
        }
        sum += p[i];
    }
    if (std::abs(sum - 1.0) > kMassTolerance) {
        std::ostringstream os;
        os.precision(15);
        os << what << ": row sum " << sum;
        return os.str();
    }
    return std::nullopt;
}

} // namespace

std::optional<std::string> validate_model(const MdpModel& model) {
    const auto E = static_cast<std::size_t>(model.num_states);
    const auto A = static_cast<std::size_t>(model.num_actions);
    if (model.num_states < 1)
        return "model must have at least one state";
    if (model.num_actions < 1)
        return "model must have at least one action";
    if (model.horizon < 1)
        return "horizon must be at least 1";
    if (model.rewards.size() != static_cast<std::size_t>(model.horizon) * E * A)
        return "reward table has wrong shape";
    if (model.terminal.size() != E)
        return "terminal reward has wrong shape";
    if (model.transitions.size() != E * A * E)
        return "transition table has wrong shape";
    if (model.initial.size() != E)
        return "initial distribution has wrong shape";
    if (!model.positions.empty() && model.positions.size() != E)
        return "state positions have wrong shape";

    for (int n = 0; n < model.horizon; ++n)
        for (int x = 0; x < model.num_states; ++x)
            for (int a = 0; a < model.num_actions; ++a)
                if (!std::isfinite(model.reward(n, x, a))) {
                    std::ostringstream os;
                    os << "non-finite reward r_" << n << "(" << x << "," << a << ")";
                    return os.str();
                }
    for (std::size_t x = 0; x < E; ++x)
        if (!std::isfinite(model.terminal[x]))
            return "non-finite terminal reward at state " + std::to_string(x);

    for (int x = 0; x < model.num_states; ++x)
        for (int a = 0; a < model.num_actions; ++a) {
            std::ostringstream what;
            what << "transition row q(.|" << x << "," << a << ")";
            if (auto err = check_distribution(model.transition_row(x, a), what.str()))
                return err;
        }
    if (auto err = check_distribution(model.initial, "initial distribution"))
        return err;
    return std::nullopt;
}

void require_valid(const MdpModel& model) {
    if (auto err = validate_model(model))
        throw ValidationError(*err);
}

} // namespace distdp
