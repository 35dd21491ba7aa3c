#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace distdp {

/**
 * Finite-state model whose action set is a compact box in R^d, optionally
 * cut down by a per-state feasibility predicate. Rewards and transitions are
 * given as functions of the continuous action.
 */
struct ContinuousActionModel {
    int num_states = 0;
    int horizon = 0;
    std::vector<double> lower;
    std::vector<double> upper;
    std::function<bool(int state, std::span<const double> action)> feasible;
    std::function<double(int stage, int state, std::span<const double> action)> reward;
    /// Writes q(. | state, action) into `row` (size num_states).
    std::function<void(int state, std::span<const double> action, std::span<double> row)> transition;
    std::vector<double> initial;

    int action_dim() const { return static_cast<int>(lower.size()); }
};

/// Uniform grid with `resolution` points per coordinate, restricted to feasible actions.
std::vector<std::vector<double>> action_grid(const ContinuousActionModel& model, int state, int resolution);

struct CompactSolveReport {
    /// sup over grid kernels of sum_n rhat_n(F_n, pi_n) + H(F_N).
    double value = 0.0;
    /// actions[n][x]: the action chosen at stage n in state x.
    std::vector<std::vector<std::vector<double>>> actions;
    /// Marginal state distributions F_0..F_N.
    std::vector<std::vector<double>> trajectory;
    std::vector<double> stage_rewards;
    std::size_t nodes_expanded = 0;
    int resolution = 0;
};

/**
 * Value iteration J_n(F) = sup_pi { rhat_n(F, pi) + J_{n+1}(T^pi F) } on
 * marginal states, with kernels restricted to deterministic maps E -> grid.
 * Computed along the trajectory from F_0 by memoized search, so the result
 * is a lower bound of the continuous problem that is nondecreasing under
 * nested grid refinement. States without mass keep their first grid action.
 *
 * Throws ValidationError if some state has no feasible grid point and
 * BudgetExceeded when more than `budget` kernels would be expanded.
 */
CompactSolveReport compact_grid_value_iteration(const ContinuousActionModel& model,
                                                const std::function<double(std::span<const double>)>& terminal,
                                                int resolution, double budget = 5e7);

} // namespace distdp
