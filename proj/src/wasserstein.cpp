#include "distdp/wasserstein.hpp"

#include "distdp/errors.hpp"
#include "distdp/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace distdp {

double wasserstein_1d(std::span<const double> F, std::span<const double> G) {
    if (F.size() != G.size())
        throw ShapeError("wasserstein_1d: length mismatch");
    double cf = 0.0, cg = 0.0, d = 0.0;
    for (std::size_t j = 0; j + 1 < F.size(); ++j) {
        cf += F[j];
        cg += G[j];
        d += std::abs(cf - cg);
    }
    return d;
}

double wasserstein_1d(std::span<const double> F, std::span<const double> G, std::span<const double> positions) {
    if (F.size() != G.size() || F.size() != positions.size())
        throw ShapeError("wasserstein_1d: length mismatch");
    std::vector<std::size_t> order(F.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return positions[a] < positions[b]; });
    double cf = 0.0, cg = 0.0, d = 0.0;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        cf += F[order[k]];
        cg += G[order[k]];
        d += std::abs(cf - cg) * (positions[order[k + 1]] - positions[order[k]]);
    }
    return d;
}

namespace {

constexpr std::int64_t kMaxMassDenominator = 1'000'000;
constexpr std::int64_t kFallbackDenominator = std::int64_t{1} << 50;

struct Scaled {
    std::vector<std::int64_t> supply;
    std::vector<std::int64_t> demand;
    std::int64_t denominator;
    bool exact;
};

std::vector<std::int64_t> to_units(std::span<const double> p, std::int64_t den) {
    std::vector<std::int64_t> u(p.size());
    std::int64_t total = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0) || !std::isfinite(p[i]))
            throw ValidationError("transport masses must be nonnegative and finite");
        u[i] = std::llround(p[i] * static_cast<double>(den));
        total += u[i];
    }
    // Rounding slack goes to the largest entry.
    const std::int64_t diff = den - total;
    if (std::abs(static_cast<double>(diff)) > 1e-9 * static_cast<double>(den) + static_cast<double>(p.size()))
        throw ValidationError("transport masses must sum to 1");
    auto it = std::max_element(u.begin(), u.end());
    *it += diff;
    if (*it < 0)
        throw ValidationError("transport masses could not be rationalized");
    return u;
}

Scaled scale_masses(std::span<const double> F, std::span<const double> G) {
    std::int64_t den = 1;
    bool exact = true;
    for (auto side : {F, G}) {
        for (double m : side) {
            auto f = rationalize(m, kMaxMassDenominator);
            std::optional<std::int64_t> l;
            if (f)
                l = bounded_lcm(den, f->den, kFallbackDenominator);
            if (!l) {
                exact = false;
                break;
            }
            den = *l;
        }
        if (!exact)
            break;
    }
    if (!exact)
        den = kFallbackDenominator;
    return {to_units(F, den), to_units(G, den), den, exact};
}

struct Edge {
    int to;
    std::int64_t cap;
    std::int64_t cost;
};

class MinCostFlow {
public:
    explicit MinCostFlow(int n) : adj_(static_cast<std::size_t>(n)) {}

    std::size_t add_edge(int from, int to, std::int64_t cap, std::int64_t cost) {
        const std::size_t id = edges_.size();
        edges_.push_back({to, cap, cost});
        edges_.push_back({from, 0, -cost});
        adj_[static_cast<std::size_t>(from)].push_back(id);
        adj_[static_cast<std::size_t>(to)].push_back(id + 1);
        return id;
    }

    std::int64_t flow_on(std::size_t id) const { return edges_[id ^ 1].cap; }

    /// Pushes as much flow as possible from s to t; returns total cost.
    std::int64_t run(int s, int t) {
        const auto n = adj_.size();
        constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
        std::vector<std::int64_t> potential(n, 0), dist(n);
        std::vector<std::size_t> via(n);
        std::vector<char> done(n);
        std::int64_t total_cost = 0;
        for (;;) {
            std::fill(dist.begin(), dist.end(), inf);
            std::fill(done.begin(), done.end(), 0);
            dist[static_cast<std::size_t>(s)] = 0;
            // Dense Dijkstra on reduced costs.
            for (std::size_t iter = 0; iter < n; ++iter) {
                std::size_t u = n;
                for (std::size_t v = 0; v < n; ++v)
                    if (!done[v] && dist[v] < inf && (u == n || dist[v] < dist[u]))
                        u = v;
                if (u == n)
                    break;
                done[u] = 1;
                for (std::size_t id : adj_[u]) {
                    const Edge& e = edges_[id];
                    if (e.cap <= 0)
                        continue;
                    const auto v = static_cast<std::size_t>(e.to);
                    const std::int64_t nd = dist[u] + e.cost + potential[u] - potential[v];
                    if (nd < dist[v]) {
                        dist[v] = nd;
                        via[v] = id;
                    }
                }
            }
            if (dist[static_cast<std::size_t>(t)] >= inf)
                break;
            for (std::size_t v = 0; v < n; ++v)
                if (dist[v] < inf)
                    potential[v] += dist[v];

            std::int64_t push = inf;
            for (auto v = static_cast<std::size_t>(t); v != static_cast<std::size_t>(s);) {
                const std::size_t id = via[v];
                push = std::min(push, edges_[id].cap);
                v = static_cast<std::size_t>(edges_[id ^ 1].to);
            }
            for (auto v = static_cast<std::size_t>(t); v != static_cast<std::size_t>(s);) {
                const std::size_t id = via[v];
                edges_[id].cap -= push;
                edges_[id ^ 1].cap += push;
                total_cost += push * edges_[id].cost;
                v = static_cast<std::size_t>(edges_[id ^ 1].to);
            }
        }
        return total_cost;
    }

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> adj_;
};

} // namespace

TransportPlan lp_transport_oracle(std::span<const double> F, std::span<const double> G) {
    if (F.size() != G.size() || F.empty())
        throw ShapeError("lp_transport_oracle: length mismatch");
    const int K = static_cast<int>(F.size());
    Scaled sc = scale_masses(F, G);

    const int source = 2 * K, sink = 2 * K + 1;
    MinCostFlow mcf(2 * K + 2);
    for (int j = 0; j < K; ++j) {
        if (sc.supply[static_cast<std::size_t>(j)] > 0)
            mcf.add_edge(source, j, sc.supply[static_cast<std::size_t>(j)], 0);
        if (sc.demand[static_cast<std::size_t>(j)] > 0)
            mcf.add_edge(K + j, sink, sc.demand[static_cast<std::size_t>(j)], 0);
    }
    std::vector<std::size_t> arc(static_cast<std::size_t>(K) * K);
    for (int j = 0; j < K; ++j)
        for (int i = 0; i < K; ++i)
            arc[static_cast<std::size_t>(j) * K + i] = mcf.add_edge(j, K + i, sc.denominator, std::abs(j - i));

    const std::int64_t cost = mcf.run(source, sink);

    TransportPlan plan;
    plan.size = K;
    plan.denominator = sc.denominator;
    plan.exact = sc.exact;
    plan.value = static_cast<double>(cost) / static_cast<double>(sc.denominator);
    plan.flow.resize(static_cast<std::size_t>(K) * K);
    for (std::size_t k = 0; k < arc.size(); ++k)
        plan.flow[k] = static_cast<double>(mcf.flow_on(arc[k])) / static_cast<double>(sc.denominator);
    return plan;
}

} // namespace distdp
