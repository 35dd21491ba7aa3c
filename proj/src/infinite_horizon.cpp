#include "distdp/infinite_horizon.hpp"

#include "distdp/errors.hpp"
#include "distdp/reward_support.hpp"

#include <cmath>

namespace distdp {

void validate(const DiscountSpec& spec) {
    if (!(spec.beta > 0.0 && spec.beta < 1.0))
        throw ValidationError("discount factor must lie in (0, 1)");
    if (!(spec.reward_bound >= 0.0) || !(spec.lipschitz >= 0.0))
        throw ValidationError("reward bound and Lipschitz constant must be nonnegative");
}

MdpModel build_discounted_model(const MdpModel& base, double beta, int stages) {
    if (!(beta > 0.0 && beta < 1.0))
        throw ValidationError("discount factor must lie in (0, 1)");
    if (stages < 1)
        throw ValidationError("discounted model needs at least one stage");
    require_valid(base);
    if (!base.has_stationary_rewards())
        throw ValidationError("discounting requires stationary base rewards");

    MdpModel m = base;
    m.horizon = stages;
    const std::size_t stage_size = static_cast<std::size_t>(base.num_states) * base.num_actions;
    m.rewards.assign(stage_size * static_cast<std::size_t>(stages), 0.0);
    double factor = 1.0;
    for (int k = 0; k < stages; ++k) {
        for (std::size_t i = 0; i < stage_size; ++i)
            m.rewards[static_cast<std::size_t>(k) * stage_size + i] = factor * base.rewards[i];
        factor *= beta;
    }
    std::fill(m.terminal.begin(), m.terminal.end(), 0.0);
    return m;
}

double truncation_bound(const DiscountSpec& spec, int m) {
    validate(spec);
    if (m < 0)
        throw ValidationError("truncation index must be nonnegative");
    return spec.lipschitz * std::pow(spec.beta, m + 1) * spec.reward_bound / (1.0 - spec.beta);
}

InfiniteHorizonReport solve_to_tolerance(const MdpModel& base, const ObjectiveFunctional& objective, double beta,
                                         double epsilon, const SolverOptions& options) {
    if (!objective.regularity().lipschitz)
        throw ValidationError("infinite-horizon truncation needs a Wasserstein-Lipschitz objective");
    if (!(epsilon > 0.0))
        throw ValidationError("epsilon must be positive");
    const DiscountSpec spec{beta, base.reward_bound(), *objective.regularity().lipschitz};
    validate(spec);

    int wanted = 1;
    while (truncation_bound(spec, wanted - 1) > epsilon)
        ++wanted;

    InfiniteHorizonReport rep;
    rep.epsilon = epsilon;
    // Shrink the horizon until the support fits.
    int stages = wanted;
    for (;;) {
        const MdpModel m = build_discounted_model(base, beta, stages);
        try {
            (void)compute_reward_support(m, options.support_cap);
            rep.solve = lifted_value_iteration(m, objective, options);
            break;
        } catch (const BudgetExceeded&) {
            if (stages == 1)
                throw;
            --stages;
        }
    }
    rep.stages = stages;
    rep.reached_epsilon = stages == wanted;
    rep.truncation_gap = truncation_bound(spec, stages - 1);
    rep.certified = rep.solve.stats.certified;
    return rep;
}

std::vector<int> dyadic_policy(double target, int stages) {
    if (!(target >= 0.0 && target <= 1.0))
        throw ValidationError("dyadic target must lie in [0, 1]");
    std::vector<int> actions(static_cast<std::size_t>(std::max(stages, 0)), 0);
    double remaining = target;
    double weight = 0.5;
    for (auto& a : actions) {
        if (remaining >= weight) {
            a = 1;
            remaining -= weight;
        }
        weight *= 0.5;
    }
    return actions;
}

double dyadic_partial_sum(const std::vector<int>& actions) {
    double sum = 0.0, weight = 0.5;
    for (int a : actions) {
        sum += weight * a;
        weight *= 0.5;
    }
    return sum;
}

MdpModel dyadic_example_model(int horizon) {
    return MdpModel::stationary(1, 2, horizon, {0.0, 0.5}, {0.0}, {1.0, 1.0}, {1.0});
}

} // namespace distdp
