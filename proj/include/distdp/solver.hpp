#pragma once

#include "distdp/distribution.hpp"
#include "distdp/model.hpp"
#include "distdp/objective.hpp"
#include "distdp/policy.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace distdp {

/**
 * Backward-recursion tables. values[n] is indexed [x * |S_n| + s] (for the
 * classical reduction |S_n| is taken as 1); argmax[n] holds the
 * lowest-index maximizing action for n < N.
 */
struct ValueTables {
    std::shared_ptr<const RewardSupport> support;
    std::vector<std::vector<double>> values;
    std::vector<std::vector<int>> argmax;

    std::size_t width(int stage) const {
        return support ? support->size(stage) : std::size_t{1};
    }
    double value(int stage, int x, std::size_t s = 0) const {
        return values[static_cast<std::size_t>(stage)][static_cast<std::size_t>(x) * width(stage) + s];
    }
    int action(int stage, int x, std::size_t s = 0) const {
        return argmax[static_cast<std::size_t>(stage)][static_cast<std::size_t>(x) * width(stage) + s];
    }
    /// sum_x nu(x) V_0(x, 0).
    double initial_value(const MdpModel& model) const;
};

/// V_N = w; V_n(x,s) = max_a sum_x' V_{n+1}(x', s + r_n(x,a)) q(x'|x,a).
/// `weights` is indexed [x * |S_N| + s].
ValueTables linear_terminal_dp(const MdpModel& model, std::vector<double> weights,
                               std::shared_ptr<const RewardSupport> support = nullptr);

/// linear_terminal_dp with the weights of a linear objective.
ValueTables linear_terminal_dp(const MdpModel& model, const ObjectiveFunctional& objective,
                               std::shared_ptr<const RewardSupport> support = nullptr);

/// V_N = g; V_n(x) = max_a { r_n(x,a) + sum_x' V_{n+1}(x') q(x'|x,a) }.
ValueTables classical_bellman(const MdpModel& model);

/// Maximal P(R_{N-1} + g(X_N) >= t) via the augmented-state recursion.
ValueTables quantile_dp(const MdpModel& model, double threshold,
                        std::shared_ptr<const RewardSupport> support = nullptr);

enum class Strategy {
    /// Linear objectives: row-decomposed recursion; otherwise exhaustive
    /// when within budget, else coordinate ascent.
    Auto,
    /// All deterministic kernels on mass-carrying rows, memoized on the
    /// quantized distribution.
    Exhaustive,
    /// Multi-start ascent over single kernel rows; a lower bound.
    CoordinateAscent,
    /// Exact for linear H: J_n is linear in F so the sup splits by row.
    LinearDecomposition,
};

std::string to_string(Strategy s);

struct SolverOptions {
    Strategy strategy = Strategy::Auto;
    /// Cap on the number of deterministic kernel sequences over reachable rows.
    double exhaustive_budget = 1e7;
    int restarts = 16;
    /// Coordinate ascent over point-mass rows only.
    bool deterministic_rows = false;
    int max_sweeps = 100;
    double improvement_tolerance = 1e-10;
    std::uint64_t seed = 0;
    /// Quantization of distributions used as memo keys.
    double memo_quantum = 1e-9;
    std::size_t support_cap = 1'000'000;
    /// Project the action sequence to a history policy when |histories| stays below this.
    double projection_cap = 1e6;
};

struct SolverStats {
    std::string strategy;
    bool certified = false;
    std::size_t nodes_expanded = 0;
    int restarts = 0;
    std::vector<double> best_so_far;
};

struct SolveReport {
    /// H(F_N) in the objective's natural sense.
    double value = 0.0;
    /// The maximized quantity (value, or -value for minimized objectives).
    double score = 0.0;
    LiftedActionSequence actions;
    std::vector<JointDistribution> trajectory;
    std::optional<HistoryPolicy> policy;
    SolverStats stats;
};

/**
 * Optimizes H over kernel sequences of the lifted (deterministic) problem
 * starting from F_0 = nu (x) delta_0.
 *
 * Throws ValidationError when H declares neither upper semicontinuity nor a
 * Lipschitz constant, and BudgetExceeded when Exhaustive is requested beyond
 * its budget.
 */
SolveReport lifted_value_iteration(const MdpModel& model, const ObjectiveFunctional& objective,
                                   const SolverOptions& options = {});

/// Number of deterministic kernel sequences over rows reachable from F_0 (log10).
double exhaustive_search_size_log10(const MdpModel& model, const RewardSupport& support);

} // namespace distdp
