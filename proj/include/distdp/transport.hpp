#pragma once

#include "distdp/compact.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace distdp {

/**
 * Controlled nearest-neighbour walk on the grid {1..K}. Vectors are indexed
 * 0..K-1, so entry i is grid point i + 1. Stage n in {0..N-1} pays costs[n].
 */
struct TransportInstance {
    int K = 0;
    int N = 0;
    std::vector<double> costs;
    std::vector<double> target;
    std::vector<double> initial;
};

std::optional<std::string> validate_instance(const TransportInstance& inst);
void require_valid(const TransportInstance& inst);

/// Outgoing masses per state: up[i] moves to i + 1, down[i] moves to i - 1.
struct MassMovePlan {
    std::vector<double> up;
    std::vector<double> down;

    double moved() const;
    bool empty() const;
};

/// Sign threshold: surpluses with |delta| <= this count as zero.
inline constexpr double kSignTolerance = 1e-13;

/// sum_{j<x} F(j) - sum_{j<x} G(j), with x a 0-based index.
double delta_lower(std::span<const double> F, std::span<const double> G, int x);
/// sum_{j>x} F(j) - sum_{j>x} G(j), with x a 0-based index.
double delta_upper(std::span<const double> F, std::span<const double> G, int x);

struct StepResult {
    MassMovePlan plan;
    std::vector<double> next;
    /// States that took the both-negative branch, and whether F_next equals G there.
    std::vector<int> case4_states;
    int case4_mismatches = 0;
};

/// One pass of the four-branch rule over all states. Throws std::logic_error
/// if a plan exceeds the available mass.
StepResult algorithm1_step(std::span<const double> F, std::span<const double> G);

struct TransportTrace {
    /// F_0..F_N.
    std::vector<std::vector<double>> distributions;
    std::vector<MassMovePlan> plans;
    std::vector<double> moved;
    std::vector<double> stage_costs;
    /// W_1(F_n, G) for n = 0..N.
    std::vector<double> distances;
    double total_cost = 0.0;
    double terminal_distance = 0.0;
    double objective = 0.0;
    int case4_states = 0;
    int case4_mismatches = 0;
};

TransportTrace run_algorithm1(const TransportInstance& inst);

/// Runs the step rule `steps` times without reading costs or N.
TransportTrace run_algorithm1(std::span<const double> initial, std::span<const double> target, int steps);

struct StructuralReport {
    bool passed = true;
    std::vector<std::string> violations;
    bool lp_checked = false;
    double lp_value = 0.0;
};

/// Sink property, mass conservation, feasibility, monotone W_1 and, with
/// unit costs and N >= K - 1, total cost equal to the transport LP value.
StructuralReport structural_check(const TransportTrace& trace, const TransportInstance& inst);

/// Kernel probabilities (a1, a2) = (up, down) / F(x); zero action where F(x) = 0.
std::vector<std::vector<double>> plan_to_kernel(const MassMovePlan& plan, std::span<const double> F);

/// Continuous-action view: actions (a1, a2) in [0,1]^2 with a1 + a2 <= 1,
/// a2 = 0 at the first grid point and a1 = 0 at the last. Rewards are the
/// negated costs so that maximizing matches the cost minimization.
ContinuousActionModel make_random_walk_model(const TransportInstance& inst);

/// G(j) proportional to exp(-(j - K/2)^2 / (2 sigma^2)), j = 1..K.
std::vector<double> rescaled_normal_target(int K, double sigma);
/// G(j) proportional to lambda exp(-lambda (j - K/2)) for j > K/2, else 0.
std::vector<double> shifted_exponential_target(int K, double lambda);

/// K independent uniform draws from {0..10} (mt19937_64, rejection sampled).
std::vector<int> sample_initial_raw(int K, std::uint64_t seed);
/// Normalized draws; redrawn with the same generator if all are zero.
std::vector<double> sample_initial(int K, std::uint64_t seed);

} // namespace distdp
