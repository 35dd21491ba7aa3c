#include "distdp/distribution.hpp"

#include "distdp/errors.hpp"

#include <cmath>
#include <sstream>

namespace distdp {

JointDistribution::JointDistribution(std::shared_ptr<const RewardSupport> support, int stage)
    : support_(std::move(support)), stage_(stage) {
    if (!support_ || stage < 0 || stage > support_->horizon())
        throw ShapeError("joint distribution stage outside the reward support");
    num_states_ = support_->num_states();
    num_rewards_ = support_->size(stage);
    mass_.assign(static_cast<std::size_t>(num_states_) * num_rewards_, 0.0);
}

JointDistribution JointDistribution::initial(std::shared_ptr<const RewardSupport> support,
                                             std::span<const double> nu) {
    JointDistribution f(std::move(support), 0);
    if (nu.size() != static_cast<std::size_t>(f.num_states_))
        throw ShapeError("initial distribution has wrong size");
    for (int x = 0; x < f.num_states_; ++x)
        f(x, 0) = nu[static_cast<std::size_t>(x)];
    return f;
}

double JointDistribution::total() const {
    double t = 0.0;
    for (double m : mass_)
        t += m;
    return t;
}

std::vector<double> JointDistribution::state_marginal() const {
    std::vector<double> out(static_cast<std::size_t>(num_states_), 0.0);
    for (int x = 0; x < num_states_; ++x)
        for (std::size_t s = 0; s < num_rewards_; ++s)
            out[static_cast<std::size_t>(x)] += (*this)(x, s);
    return out;
}

std::vector<double> JointDistribution::reward_marginal() const {
    std::vector<double> out(num_rewards_, 0.0);
    for (int x = 0; x < num_states_; ++x)
        for (std::size_t s = 0; s < num_rewards_; ++s)
            out[s] += (*this)(x, s);
    return out;
}

double JointDistribution::mean_reward() const {
    double m = 0.0;
    for (int x = 0; x < num_states_; ++x)
        for (std::size_t s = 0; s < num_rewards_; ++s)
            m += support_->value(stage_, s) * (*this)(x, s);
    return m;
}

double JointDistribution::max_abs_diff(const JointDistribution& other) const {
    if (stage_ != other.stage_ || num_states_ != other.num_states_ || num_rewards_ != other.num_rewards_)
        throw ShapeError("comparing joint distributions of different shape");
    if (support_ != other.support_ && !(*support_ == *other.support_))
        throw ShapeError("comparing joint distributions over different reward supports");
    double d = 0.0;
    for (std::size_t i = 0; i < mass_.size(); ++i)
        d = std::max(d, std::abs(mass_[i] - other.mass_[i]));
    return d;
}

KernelAction::KernelAction(int num_states, std::size_t num_rewards, int num_actions)
    : num_states_(num_states), num_rewards_(num_rewards), num_actions_(num_actions) {
    if (num_actions < 1)
        throw ShapeError("kernel needs at least one action");
    probs_.assign(static_cast<std::size_t>(num_states) * num_rewards * static_cast<std::size_t>(num_actions),
                  1.0 / num_actions);
}

KernelAction KernelAction::constant(int num_states, std::size_t num_rewards, int num_actions, int action) {
    KernelAction k(num_states, num_rewards, num_actions);
    for (int x = 0; x < num_states; ++x)
        for (std::size_t s = 0; s < num_rewards; ++s)
            k.set_deterministic(x, s, action);
    return k;
}

void KernelAction::set_deterministic(int x, std::size_t s, int action) {
    auto r = row(x, s);
    std::fill(r.begin(), r.end(), 0.0);
    r[static_cast<std::size_t>(action)] = 1.0;
}

bool KernelAction::is_deterministic() const {
    for (std::size_t i = 0; i < probs_.size(); ++i)
        if (probs_[i] != 0.0 && probs_[i] != 1.0)
            return false;
    return true;
}

std::optional<std::string> KernelAction::validate() const {
    for (int x = 0; x < num_states_; ++x)
        for (std::size_t s = 0; s < num_rewards_; ++s) {
            double sum = 0.0;
            for (double p : row(x, s)) {
                if (!std::isfinite(p) || p < 0.0)
                    return "kernel row (" + std::to_string(x) + "," + std::to_string(s) + ") has a negative entry";
                sum += p;
            }
            if (std::abs(sum - 1.0) > kMassTolerance) {
                std::ostringstream os;
                os << "kernel row (" << x << "," << s << ") sums to " << sum;
                return os.str();
            }
        }
    return std::nullopt;
}

} // namespace distdp
