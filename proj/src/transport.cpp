#include "distdp/transport.hpp"

#include "distdp/errors.hpp"
#include "distdp/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace distdp {

namespace {

std::optional<std::string> check_distribution(std::span<const double> p, int K, const char* name) {
    if (p.size() != static_cast<std::size_t>(K))
        return std::string(name) + ": expected " + std::to_string(K) + " entries, got " + std::to_string(p.size());
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i]) || p[i] < 0.0)
            return std::string(name) + ": entry " + std::to_string(i + 1) + " is negative or not finite";
        total += p[i];
    }
    if (std::abs(total - 1.0) > 1e-9)
        return std::string(name) + ": masses sum to " + std::to_string(total);
    return std::nullopt;
}

} // namespace

std::optional<std::string> validate_instance(const TransportInstance& inst) {
    if (inst.K < 2)
        return "grid size K must be at least 2";
    if (inst.N < 1)
        return "horizon N must be at least 1";
    if (inst.costs.size() != static_cast<std::size_t>(inst.N))
        return "costs: expected " + std::to_string(inst.N) + " stage costs, got " + std::to_string(inst.costs.size());
    for (std::size_t n = 0; n < inst.costs.size(); ++n) {
        const double c = inst.costs[n];
        if (!(c > 0.0 && c <= 1.0))
            return "costs: stage " + std::to_string(n) + " cost must lie in (0, 1]";
        if (n > 0 && c < inst.costs[n - 1])
            return "costs: stage costs must be nondecreasing (stage " + std::to_string(n) + ")";
    }
    if (auto err = check_distribution(inst.target, inst.K, "target"))
        return err;
    if (auto err = check_distribution(inst.initial, inst.K, "initial"))
        return err;
    return std::nullopt;
}

void require_valid(const TransportInstance& inst) {
    if (auto err = validate_instance(inst))
        throw ValidationError(*err);
}

double MassMovePlan::moved() const {
    double m = 0.0;
    for (std::size_t i = 0; i < up.size(); ++i)
        m += up[i] + down[i];
    return m;
}

bool MassMovePlan::empty() const {
    return std::all_of(up.begin(), up.end(), [](double v) { return v == 0.0; }) &&
           std::all_of(down.begin(), down.end(), [](double v) { return v == 0.0; });
}

double delta_lower(std::span<const double> F, std::span<const double> G, int x) {
    double d = 0.0;
    for (int j = 0; j < x; ++j)
        d += F[static_cast<std::size_t>(j)] - G[static_cast<std::size_t>(j)];
    return d;
}

double delta_upper(std::span<const double> F, std::span<const double> G, int x) {
    double d = 0.0;
    for (std::size_t j = static_cast<std::size_t>(x) + 1; j < F.size(); ++j)
        d += F[j] - G[j];
    return d;
}

StepResult algorithm1_step(std::span<const double> F, std::span<const double> G) {
    if (F.size() != G.size() || F.size() < 2)
        throw ShapeError("algorithm1_step: F and G must be distributions on the same grid");
    const std::size_t K = F.size();
    StepResult res;
    res.plan.up.assign(K, 0.0);
    res.plan.down.assign(K, 0.0);

    // Suffix surpluses, then a running prefix surplus.
    std::vector<double> upper(K, 0.0);
    for (std::size_t x = K - 1; x-- > 0;)
        upper[x] = upper[x + 1] + (F[x + 1] - G[x + 1]);

    double lower = 0.0;
    for (std::size_t x = 0; x < K; ++x) {
        const bool lower_neg = lower < -kSignTolerance;
        const bool upper_neg = upper[x] < -kSignTolerance;
        double& up = res.plan.up[x];
        double& down = res.plan.down[x];
        if (!lower_neg && upper_neg) {
            up = std::min(F[x], -upper[x]);
        } else if (lower_neg && !upper_neg) {
            down = std::min(F[x], -lower);
        } else if (lower_neg && upper_neg) {
            up = -upper[x];
            down = -lower;
            res.case4_states.push_back(static_cast<int>(x));
        }
        if (up + down > F[x] + kMassTolerance)
            throw std::logic_error("algorithm1_step: planned outflow exceeds the mass at state " +
                                   std::to_string(x + 1));
        lower += F[x] - G[x];
    }

    res.next.assign(K, 0.0);
    for (std::size_t x = 0; x < K; ++x) {
        double v = F[x] - res.plan.up[x] - res.plan.down[x];
        if (x > 0)
            v += res.plan.up[x - 1];
        if (x + 1 < K)
            v += res.plan.down[x + 1];
        res.next[x] = v < 0.0 && v > -kMassTolerance ? 0.0 : v;
    }
    for (int x : res.case4_states)
        if (std::abs(res.next[static_cast<std::size_t>(x)] - G[static_cast<std::size_t>(x)]) > kMassTolerance)
            ++res.case4_mismatches;
    return res;
}

TransportTrace run_algorithm1(std::span<const double> initial, std::span<const double> target, int steps) {
    TransportTrace tr;
    tr.distributions.emplace_back(initial.begin(), initial.end());
    tr.distances.push_back(wasserstein_1d(initial, target));
    for (int n = 0; n < steps; ++n) {
        StepResult step = algorithm1_step(tr.distributions.back(), target);
        tr.moved.push_back(step.plan.moved());
        tr.case4_states += static_cast<int>(step.case4_states.size());
        tr.case4_mismatches += step.case4_mismatches;
        tr.plans.push_back(std::move(step.plan));
        tr.distances.push_back(wasserstein_1d(step.next, target));
        tr.distributions.push_back(std::move(step.next));
    }
    tr.terminal_distance = tr.distances.back();
    tr.objective = tr.terminal_distance;
    return tr;
}

TransportTrace run_algorithm1(const TransportInstance& inst) {
    require_valid(inst);
    TransportTrace tr = run_algorithm1(inst.initial, inst.target, inst.N);
    for (int n = 0; n < inst.N; ++n) {
        const double c = inst.costs[static_cast<std::size_t>(n)] * tr.moved[static_cast<std::size_t>(n)];
        tr.stage_costs.push_back(c);
        tr.total_cost += c;
    }
    tr.objective = tr.total_cost + tr.terminal_distance;
    return tr;
}

StructuralReport structural_check(const TransportTrace& trace, const TransportInstance& inst) {
    StructuralReport rep;
    auto fail = [&](std::string msg) {
        rep.passed = false;
        rep.violations.push_back(std::move(msg));
    };
    const auto K = static_cast<std::size_t>(inst.K);
    const std::size_t stages = trace.plans.size();

    for (std::size_t n = 0; n < stages; ++n) {
        const auto& F = trace.distributions[n];
        const auto& plan = trace.plans[n];
        double before = 0.0, after = 0.0;
        for (std::size_t x = 0; x < K; ++x) {
            before += F[x];
            after += trace.distributions[n + 1][x];
            if (plan.up[x] < 0.0 || plan.down[x] < 0.0 || plan.up[x] + plan.down[x] > F[x] + kMassTolerance)
                fail("feasibility: stage " + std::to_string(n) + " state " + std::to_string(x + 1));
        }
        if (std::abs(before - after) > kMassTolerance)
            fail("mass conservation: stage " + std::to_string(n));
        if (trace.distances[n + 1] > trace.distances[n] + kMassTolerance)
            fail("monotone distance: stage " + std::to_string(n));
    }

    // Sink: once a state keeps some of its mass, it never sends mass again.
    for (std::size_t x = 0; x < K; ++x) {
        std::optional<std::size_t> retained;
        for (std::size_t n = 0; n < stages; ++n) {
            const double out = trace.plans[n].up[x] + trace.plans[n].down[x];
            if (retained && out != 0.0) {
                fail("sink: state " + std::to_string(x + 1) + " retained mass at stage " + std::to_string(*retained) +
                     " but moves mass at stage " + std::to_string(n));
                break;
            }
            if (!retained && trace.distributions[n][x] - out > kMassTolerance)
                retained = n;
        }
    }

    const bool unit_costs = std::all_of(inst.costs.begin(), inst.costs.end(), [](double c) { return c == 1.0; });
    if (unit_costs && inst.N >= inst.K - 1) {
        rep.lp_checked = true;
        rep.lp_value = lp_transport_oracle(inst.initial, inst.target).value;
        if (std::abs(trace.total_cost - rep.lp_value) > 1e-9)
            fail("unit-cost identity: total cost " + std::to_string(trace.total_cost) + " vs transport value " +
                 std::to_string(rep.lp_value));
        if (trace.terminal_distance > 1e-9)
            fail("completion: terminal distance " + std::to_string(trace.terminal_distance));
    }
    return rep;
}

std::vector<std::vector<double>> plan_to_kernel(const MassMovePlan& plan, std::span<const double> F) {
    std::vector<std::vector<double>> kernel(F.size(), std::vector<double>(2, 0.0));
    for (std::size_t x = 0; x < F.size(); ++x) {
        if (F[x] > 0.0) {
            kernel[x][0] = plan.up[x] / F[x];
            kernel[x][1] = plan.down[x] / F[x];
        }
    }
    return kernel;
}

ContinuousActionModel make_random_walk_model(const TransportInstance& inst) {
    require_valid(inst);
    ContinuousActionModel m;
    m.num_states = inst.K;
    m.horizon = inst.N;
    m.lower = {0.0, 0.0};
    m.upper = {1.0, 1.0};
    m.initial = inst.initial;
    const int K = inst.K;
    m.feasible = [K](int x, std::span<const double> a) {
        if (a[0] + a[1] > 1.0 + 1e-12)
            return false;
        if (x == 0 && a[1] != 0.0)
            return false;
        return !(x == K - 1 && a[0] != 0.0);
    };
    m.reward = [costs = inst.costs](int n, int, std::span<const double> a) {
        return -costs[static_cast<std::size_t>(n)] * (a[0] + a[1]);
    };
    m.transition = [K](int x, std::span<const double> a, std::span<double> row) {
        std::fill(row.begin(), row.end(), 0.0);
        const auto i = static_cast<std::size_t>(x);
        double stay = 1.0;
        if (x + 1 < K) {
            row[i + 1] = a[0];
            stay -= a[0];
        }
        if (x > 0) {
            row[i - 1] = a[1];
            stay -= a[1];
        }
        row[i] = stay;
    };
    return m;
}

std::vector<double> rescaled_normal_target(int K, double sigma) {
    if (K < 2 || !(sigma > 0.0))
        throw ValidationError("normal target needs K >= 2 and sigma > 0");
    std::vector<double> g(static_cast<std::size_t>(K));
    const double centre = K / 2.0;
    double total = 0.0;
    for (int j = 1; j <= K; ++j) {
        const double z = (j - centre) / sigma;
        g[static_cast<std::size_t>(j - 1)] = std::exp(-0.5 * z * z);
        total += g[static_cast<std::size_t>(j - 1)];
    }
    for (double& v : g)
        v /= total;
    return g;
}

std::vector<double> shifted_exponential_target(int K, double lambda) {
    if (K < 2 || !(lambda > 0.0))
        throw ValidationError("exponential target needs K >= 2 and lambda > 0");
    std::vector<double> g(static_cast<std::size_t>(K), 0.0);
    const double shift = K / 2.0;
    double total = 0.0;
    for (int j = 1; j <= K; ++j) {
        if (j > shift) {
            g[static_cast<std::size_t>(j - 1)] = lambda * std::exp(-lambda * (j - shift));
            total += g[static_cast<std::size_t>(j - 1)];
        }
    }
    for (double& v : g)
        v /= total;
    return g;
}

namespace {

// Uniform on {0..10} by rejection, independent of the standard library's
// distribution implementations.
int draw_eleven(std::mt19937_64& rng) {
    constexpr std::uint64_t span = 11;
    constexpr std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    (std::numeric_limits<std::uint64_t>::max() % span + 1) % span;
    for (;;) {
        const std::uint64_t v = rng();
        if (v <= limit)
            return static_cast<int>(v % span);
    }
}

std::vector<int> draw_raw(std::mt19937_64& rng, int K) {
    std::vector<int> raw(static_cast<std::size_t>(K));
    for (int& v : raw)
        v = draw_eleven(rng);
    return raw;
}

} // namespace

std::vector<int> sample_initial_raw(int K, std::uint64_t seed) {
    if (K < 1)
        throw ValidationError("sample_initial needs K >= 1");
    std::mt19937_64 rng(seed);
    return draw_raw(rng, K);
}

std::vector<double> sample_initial(int K, std::uint64_t seed) {
    if (K < 1)
        throw ValidationError("sample_initial needs K >= 1");
    std::mt19937_64 rng(seed);
    for (;;) {
        const auto raw = draw_raw(rng, K);
        long total = 0;
        for (int v : raw)
            total += v;
        if (total == 0)
            continue;
        std::vector<double> p(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i)
            p[i] = static_cast<double>(raw[i]) / static_cast<double>(total);
        return p;
    }
}

} // namespace distdp
