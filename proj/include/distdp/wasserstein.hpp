#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace distdp {

/// W_1 on the unit-spaced grid {1..K}: sum_{j<K} |F_c(j) - G_c(j)|.
double wasserstein_1d(std::span<const double> F, std::span<const double> G);

/// W_1 for distributions placed at real positions (any order).
double wasserstein_1d(std::span<const double> F, std::span<const double> G, std::span<const double> positions);

struct TransportPlan {
    double value = 0.0;
    int size = 0;
    /// Dense plan q[j*K + i]: mass sent from j to i.
    std::vector<double> flow;
    /// Integer units per unit mass used internally.
    std::int64_t denominator = 1;
    bool exact = false;

    double operator()(int from, int to) const { return flow[static_cast<std::size_t>(from) * size + to]; }
};

/**
 * Solves the Kantorovich problem
 *   min sum q_{j,i} |j - i|  s.t. row sums F, column sums G, q >= 0
 * as a min-cost flow on the bipartite graph with integer-scaled masses
 * (successive shortest paths). Masses with denominators <= 10^6 are scaled
 * exactly by their common denominator; anything else is quantized to 2^-50.
 */
TransportPlan lp_transport_oracle(std::span<const double> F, std::span<const double> G);

} // namespace distdp
