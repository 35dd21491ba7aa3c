#pragma once

#include "distdp/model.hpp"
#include "distdp/objective.hpp"
#include "distdp/solver.hpp"

#include <vector>

namespace distdp {

struct DiscountSpec {
    double beta = 0.5;
    /// M: bound on |r(x, a)|.
    double reward_bound = 0.0;
    /// K_H: Wasserstein-Lipschitz constant of H.
    double lipschitz = 0.0;
};

/// Throws ValidationError unless 0 < beta < 1, M >= 0 and K_H >= 0.
void validate(const DiscountSpec& spec);

/// Stage-dependent model over `stages` stages with r_k = beta^k r and g = 0.
/// The base model must have stationary rewards.
MdpModel build_discounted_model(const MdpModel& base, double beta, int stages);

/// K_H beta^{m+1} M / (1 - beta): bounds |H(F_n) - H(F_m)| for every n >= m,
/// where F_m is the law of sum_{k<=m} beta^k r(X_k, A_k).
double truncation_bound(const DiscountSpec& spec, int m);

struct InfiniteHorizonReport {
    SolveReport solve;
    /// Truncation horizon used (number of discounted stages).
    int stages = 0;
    /// Certified |value - sup H(F_infinity)| from truncation alone.
    double truncation_gap = 0.0;
    /// Requested tolerance.
    double epsilon = 0.0;
    /// False when the support cap forced a shorter horizon than epsilon needs.
    bool reached_epsilon = true;
    /// Whether the finite-horizon solve was exact (otherwise the gap also
    /// includes the strategy's optimality gap).
    bool certified = false;
};

/**
 * Picks the smallest N with truncation_bound(N - 1) <= epsilon, solves the
 * N-stage discounted problem and reports the certified truncation gap.
 * H must declare a Lipschitz constant. If the reward support outgrows
 * `options.support_cap` before epsilon is met, the longest feasible horizon
 * is used and the achievable gap reported.
 */
InfiniteHorizonReport solve_to_tolerance(const MdpModel& base, const ObjectiveFunctional& objective, double beta,
                                         double epsilon, const SolverOptions& options = {});

/// Greedy binary expansion: a_k = 1 iff (1/2)^{k+1} fits in the remaining target.
std::vector<int> dyadic_policy(double target, int stages);

/// sum_{k<n} (1/2)^{k+1} a_k.
double dyadic_partial_sum(const std::vector<int>& actions);

/// E = {0}, A = {0, 1}, r(0, a) = a / 2, identity transitions, over `horizon` stages.
MdpModel dyadic_example_model(int horizon);

} // namespace distdp
