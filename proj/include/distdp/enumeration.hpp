#pragma once

#include "distdp/distribution.hpp"
#include "distdp/model.hpp"
#include "distdp/policy.hpp"

#include <functional>
#include <memory>
#include <span>

namespace distdp {

/// Default cap on |E|^{n+1} |A|^n for brute-force path enumeration.
inline constexpr double kDefaultPathCap = 1e7;

/// Number of (state, action) paths of length n: |E|^{n+1} |A|^n.
double path_count(const MdpModel& model, int stages);

/// Throws BudgetExceeded if enumerating `stages` stages exceeds `cap` paths.
void require_enumerable(const MdpModel& model, int stages, double cap = kDefaultPathCap);

/**
 * Depth-first walk over every history with positive probability.
 *
 * `on_state(n, history, prob, s)` is called for each reached h_n, where prob
 * is P(X_0..X_n, A_0..A_{n-1} = h_n) and s indexes R_{n-1} in S_n.
 * `on_action(n, history, prob, s, a)` is called for every positive-probability
 * action taken at h_n (n < stages) with the joint probability including
 * sigma_n(a | h_n). Either callback may be empty.
 */
struct PathVisitor {
    std::function<void(int, std::span<const int>, double, std::size_t)> on_state;
    std::function<void(int, std::span<const int>, double, std::size_t, int)> on_action;
};

void enumerate_paths(const MdpModel& model, const RewardSupport& support, const HistoryPolicy& policy,
                     int stages, const PathVisitor& visitor, double cap = kDefaultPathCap);

/**
 * Exact law of (X_n, R_{n-1}) under `policy`, by summing product-form path
 * probabilities over all histories. The oracle the other modules test against.
 */
JointDistribution exact_joint_distribution(const MdpModel& model, const HistoryPolicy& policy, int n,
                                           std::shared_ptr<const RewardSupport> support = nullptr,
                                           double cap = kDefaultPathCap);

} // namespace distdp
