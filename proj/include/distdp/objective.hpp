#pragma once

#include "distdp/distribution.hpp"
#include "distdp/model.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace distdp {

/// Declared regularity of a terminal functional H.
struct Regularity {
    /// H is upper semicontinuous in F.
    bool upper_semicontinuous = false;
    /// K_H with |H(F) - H(G)| <= K_H W_1(F, G), if known.
    std::optional<double> lipschitz;
};

enum class Sense { Maximize, Minimize };

/// H(F) = sum_{x,s} w(x, s) F(x, s).
struct LinearTerminal {
    std::function<double(int state, double reward)> weight;
};

/// H(F) = P(s + g(x) >= t).
struct ThresholdProbability {
    double threshold = 0.0;
};

/// H(F) = W_1(F(., S), G) using the model's state positions.
struct WassersteinToTarget {
    std::vector<double> target;
};

/// H(F) = H0(F(., S)) + sum_{x,s} s F(x, s).
struct ExpectedRewardPlusTerminal {
    std::function<double(std::span<const double> state_marginal)> terminal;
};

struct CustomObjective {
    std::function<double(const JointDistribution&, const MdpModel&)> evaluator;
};

/**
 * A terminal functional together with its optimization sense and declared
 * regularity. Solvers maximize score() = +/- evaluate(); distance objectives
 * are registered with Sense::Minimize.
 */
class ObjectiveFunctional {
public:
    using Variant = std::variant<LinearTerminal, ThresholdProbability, WassersteinToTarget,
                                 ExpectedRewardPlusTerminal, CustomObjective>;

    ObjectiveFunctional(Variant v, Sense sense, Regularity regularity, std::string name);

    /// w(x, s) = g(x) + s: the classical expected total reward.
    static ObjectiveFunctional expected_total_reward(const MdpModel& model);
    static ObjectiveFunctional linear(std::function<double(int, double)> weight, std::string name = "linear_terminal");
    static ObjectiveFunctional threshold(double t);
    static ObjectiveFunctional wasserstein(std::vector<double> target);
    /// Mean of the accumulated reward, sum s F(x,s): Wasserstein-Lipschitz with K_H = 1.
    static ObjectiveFunctional mean_reward();
    static ObjectiveFunctional expected_plus_terminal(std::function<double(std::span<const double>)> terminal,
                                                      Regularity regularity, Sense sense = Sense::Maximize);
    static ObjectiveFunctional custom(std::function<double(const JointDistribution&, const MdpModel&)> evaluator,
                                      Regularity regularity, Sense sense = Sense::Maximize,
                                      std::string name = "custom");

    const Variant& variant() const { return variant_; }
    Sense sense() const { return sense_; }
    const Regularity& regularity() const { return regularity_; }
    const std::string& name() const { return name_; }

    /// True for LinearTerminal and ThresholdProbability.
    bool is_linear() const;

    /// Per-cell weights w(x, s) over E x S_stage for linear variants.
    std::vector<double> linear_weights(const RewardSupport& support, int stage, const MdpModel& model) const;

    /// H(F) in its natural sense (distances are positive).
    double evaluate(const JointDistribution& F, const MdpModel& model) const;

    /// The quantity solvers maximize.
    double score(const JointDistribution& F, const MdpModel& model) const {
        const double h = evaluate(F, model);
        return sense_ == Sense::Maximize ? h : -h;
    }
    double from_score(double score) const { return sense_ == Sense::Maximize ? score : -score; }

private:
    Variant variant_;
    Sense sense_;
    Regularity regularity_;
    std::string name_;
};

/// 1{s + g >= t}, with a 1e-9 slack so that values equal up to rounding count as reaching t.
bool reaches_threshold(double reward, double terminal, double threshold);

} // namespace distdp
