#include "distdp/objective.hpp"

#include "distdp/errors.hpp"
#include "distdp/wasserstein.hpp"

#include <cmath>

namespace distdp {

bool reaches_threshold(double reward, double terminal, double threshold) {
    return reward + terminal >= threshold - 1e-9;
}

ObjectiveFunctional::ObjectiveFunctional(Variant v, Sense sense, Regularity regularity, std::string name)
    : variant_(std::move(v)), sense_(sense), regularity_(regularity), name_(std::move(name)) {}

ObjectiveFunctional ObjectiveFunctional::expected_total_reward(const MdpModel& model) {
    std::vector<double> g = model.terminal;
    return ObjectiveFunctional(
        LinearTerminal{[g](int x, double s) { return g[static_cast<std::size_t>(x)] + s; }}, Sense::Maximize,
        Regularity{true, std::nullopt}, "expected_total_reward");
}

ObjectiveFunctional ObjectiveFunctional::linear(std::function<double(int, double)> weight, std::string name) {
    return ObjectiveFunctional(LinearTerminal{std::move(weight)}, Sense::Maximize, Regularity{true, std::nullopt},
                               std::move(name));
}

ObjectiveFunctional ObjectiveFunctional::threshold(double t) {
    return ObjectiveFunctional(ThresholdProbability{t}, Sense::Maximize, Regularity{true, std::nullopt},
                               "threshold");
}

ObjectiveFunctional ObjectiveFunctional::wasserstein(std::vector<double> target) {
    double total = 0.0;
    for (double g : target) {
        if (!(g >= 0.0) || !std::isfinite(g))
            throw ValidationError("Wasserstein target must be nonnegative");
        total += g;
    }
    if (std::abs(total - 1.0) > kMassTolerance)
        throw ValidationError("Wasserstein target must sum to 1");
    // W_1 to a fixed target is 1-Lipschitz in W_1 and hence continuous.
    return ObjectiveFunctional(WassersteinToTarget{std::move(target)}, Sense::Minimize, Regularity{true, 1.0},
                               "wasserstein");
}

ObjectiveFunctional ObjectiveFunctional::mean_reward() {
    return ObjectiveFunctional(LinearTerminal{[](int, double s) { return s; }}, Sense::Maximize,
                               Regularity{true, 1.0}, "mean_reward");
}

ObjectiveFunctional ObjectiveFunctional::expected_plus_terminal(std::function<double(std::span<const double>)> terminal,
                                                                Regularity regularity, Sense sense) {
    return ObjectiveFunctional(ExpectedRewardPlusTerminal{std::move(terminal)}, sense, regularity,
                               "expected_plus_terminal");
}

ObjectiveFunctional ObjectiveFunctional::custom(std::function<double(const JointDistribution&, const MdpModel&)> evaluator,
                                                Regularity regularity, Sense sense, std::string name) {
    return ObjectiveFunctional(CustomObjective{std::move(evaluator)}, sense, regularity, std::move(name));
}

bool ObjectiveFunctional::is_linear() const {
    return std::holds_alternative<LinearTerminal>(variant_) || std::holds_alternative<ThresholdProbability>(variant_);
}

std::vector<double> ObjectiveFunctional::linear_weights(const RewardSupport& support, int stage,
                                                        const MdpModel& model) const {
    const auto E = static_cast<std::size_t>(model.num_states);
    const std::size_t S = support.size(stage);
    std::vector<double> w(E * S);
    if (const auto* lin = std::get_if<LinearTerminal>(&variant_)) {
        for (std::size_t x = 0; x < E; ++x)
            for (std::size_t s = 0; s < S; ++s)
                w[x * S + s] = lin->weight(static_cast<int>(x), support.value(stage, s));
    } else if (const auto* th = std::get_if<ThresholdProbability>(&variant_)) {
        for (std::size_t x = 0; x < E; ++x)
            for (std::size_t s = 0; s < S; ++s)
                w[x * S + s] = reaches_threshold(support.value(stage, s), model.terminal[x], th->threshold) ? 1.0 : 0.0;
    } else {
        throw ShapeError("objective '" + name_ + "' is not linear in F");
    }
    for (double v : w)
        if (!std::isfinite(v))
            throw ValidationError("linear terminal weights must be finite");
    return w;
}

double ObjectiveFunctional::evaluate(const JointDistribution& F, const MdpModel& model) const {
    if (F.num_states() != model.num_states)
        throw ShapeError("distribution does not match the model");
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LinearTerminal> || std::is_same_v<T, ThresholdProbability>) {
                const auto w = linear_weights(F.support(), F.stage(), model);
                double h = 0.0;
                const auto m = F.data();
                for (std::size_t i = 0; i < m.size(); ++i)
                    h += w[i] * m[i];
                return h;
            } else if constexpr (std::is_same_v<T, WassersteinToTarget>) {
                if (v.target.size() != static_cast<std::size_t>(model.num_states))
                    throw ShapeError("Wasserstein target size differs from |E|");
                const auto marg = F.state_marginal();
                std::vector<double> pos(static_cast<std::size_t>(model.num_states));
                for (int x = 0; x < model.num_states; ++x)
                    pos[static_cast<std::size_t>(x)] = model.position(x);
                return wasserstein_1d(marg, v.target, pos);
            } else if constexpr (std::is_same_v<T, ExpectedRewardPlusTerminal>) {
                return v.terminal(F.state_marginal()) + F.mean_reward();
            } else {
                return v.evaluator(F, model);
            }
        },
        variant_);
}

} // namespace distdp
