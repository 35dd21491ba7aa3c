#pragma once

// Hand-rolled generators shared by the test suites.

#include "distdp/model.hpp"
#include "distdp/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testgen {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Random probability vector whose entries are multiples of 1/den.
inline std::vector<double> rational_simplex(Rng& rng, int size, int den = 8) {
    std::vector<int> counts(static_cast<std::size_t>(size), 0);
    for (int k = 0; k < den; ++k)
        ++counts[static_cast<std::size_t>(uniform_int(rng, 0, size - 1))];
    std::vector<double> p(counts.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = static_cast<double>(counts[i]) / den;
    return p;
}

/// Random probability vector with real-valued entries (some exactly zero).
inline std::vector<double> real_simplex(Rng& rng, int size, double zero_prob = 0.2) {
    std::vector<double> p(static_cast<std::size_t>(size));
    double total = 0.0;
    for (auto& v : p) {
        v = uniform01(rng) < zero_prob ? 0.0 : uniform01(rng) + 1e-3;
        total += v;
    }
    if (total == 0.0) {
        p[static_cast<std::size_t>(uniform_int(rng, 0, size - 1))] = 1.0;
        return p;
    }
    for (auto& v : p)
        v /= total;
    return p;
}

/// Reward drawn from {-2, -3/2, ..., 2} (multiples of 1/2) or quarters.
inline double rational_reward(Rng& rng, int den = 2, int range = 4) {
    return static_cast<double>(uniform_int(rng, -range, range)) / den;
}

struct ModelShape {
    int max_states = 3;
    int max_actions = 2;
    int max_horizon = 3;
    bool stage_dependent = false;
};

inline distdp::MdpModel random_model(Rng& rng, const ModelShape& shape) {
    distdp::MdpModel m;
    m.num_states = uniform_int(rng, 1, shape.max_states);
    m.num_actions = uniform_int(rng, 1, shape.max_actions);
    m.horizon = uniform_int(rng, 1, shape.max_horizon);
    const auto E = static_cast<std::size_t>(m.num_states);
    const auto A = static_cast<std::size_t>(m.num_actions);
    std::vector<double> base(E * A);
    for (auto& r : base)
        r = rational_reward(rng);
    for (int n = 0; n < m.horizon; ++n)
        for (std::size_t i = 0; i < E * A; ++i)
            m.rewards.push_back(shape.stage_dependent ? rational_reward(rng, 4) : base[i]);
    for (std::size_t x = 0; x < E; ++x)
        m.terminal.push_back(rational_reward(rng));
    for (std::size_t i = 0; i < E * A; ++i) {
        auto row = rational_simplex(rng, m.num_states);
        m.transitions.insert(m.transitions.end(), row.begin(), row.end());
    }
    m.initial = rational_simplex(rng, m.num_states);
    return m;
}

inline distdp::MdpModel random_model_fixed(Rng& rng, int E, int A, int N) {
    ModelShape shape{E, A, N, false};
    for (;;) {
        auto m = random_model(rng, shape);
        if (m.num_states == E && m.num_actions == A && m.horizon == N)
            return m;
    }
}

/// History-dependent randomized policy with independent random rows.
inline distdp::HistoryPolicy random_history_policy(Rng& rng, const distdp::MdpModel& m,
                                                   double deterministic_prob = 0.3) {
    distdp::HistoryPolicy p(m.num_states, m.num_actions, m.horizon);
    for (int n = 0; n < m.horizon; ++n)
        for (std::size_t h = 0; h < p.num_histories(n); ++h) {
            auto row = p.probs_at(n, h);
            if (uniform01(rng) < deterministic_prob) {
                std::fill(row.begin(), row.end(), 0.0);
                row[static_cast<std::size_t>(uniform_int(rng, 0, m.num_actions - 1))] = 1.0;
            } else {
                auto r = real_simplex(rng, m.num_actions);
                std::copy(r.begin(), r.end(), row.begin());
            }
        }
    return p;
}

/// One terminal outcome (X_N, R_{N-1}) with its probability.
struct Outcome {
    int x;
    double s;
    double p;
};

/**
 * Deterministic history-dependent policies, enumerated by brute force. With
 * deterministic decisions the action history is a function of the state
 * history, so a policy is a table over state histories (x_0..x_n), n < N.
 */
class DeterministicPolicyEnumerator {
public:
    explicit DeterministicPolicyEnumerator(const distdp::MdpModel& m) : m_(m) {
        std::size_t count = 1;
        for (int n = 0; n < m.horizon; ++n) {
            count *= static_cast<std::size_t>(m.num_states);
            offset_.push_back(decisions_);
            decisions_ += count;
        }
    }

    std::size_t decisions() const { return decisions_; }

    double policy_count() const { return std::pow(static_cast<double>(m_.num_actions), static_cast<double>(decisions_)); }

    /// Calls fn(outcomes) for every policy.
    template <class Fn>
    void for_each(Fn&& fn) const {
        std::vector<int> table(decisions_, 0);
        std::vector<Outcome> out;
        for (;;) {
            out.clear();
            for (int x0 = 0; x0 < m_.num_states; ++x0)
                if (m_.initial[static_cast<std::size_t>(x0)] > 0.0)
                    walk(table, 0, static_cast<std::size_t>(x0), x0, 0.0, m_.initial[static_cast<std::size_t>(x0)], out);
            fn(static_cast<const std::vector<Outcome>&>(out));
            std::size_t pos = 0;
            while (pos < table.size() && ++table[pos] == m_.num_actions)
                table[pos++] = 0;
            if (pos == table.size())
                break;
        }
    }

private:
    void walk(const std::vector<int>& table, int n, std::size_t hist, int x, double s, double p,
              std::vector<Outcome>& out) const {
        if (n == m_.horizon) {
            out.push_back({x, s, p});
            return;
        }
        const int a = table[offset_[static_cast<std::size_t>(n)] + hist];
        const double s2 = s + m_.reward(n, x, a);
        for (int xn = 0; xn < m_.num_states; ++xn) {
            const double q = m_.prob(x, a, xn);
            if (q > 0.0)
                walk(table, n + 1, hist * static_cast<std::size_t>(m_.num_states) + static_cast<std::size_t>(xn), xn, s2,
                     p * q, out);
        }
    }

    const distdp::MdpModel& m_;
    std::vector<std::size_t> offset_;
    std::size_t decisions_ = 0;
};

/// max over deterministic history-dependent policies of P(R_{N-1} + g(X_N) >= t).
inline double best_exceedance(const distdp::MdpModel& m, double t) {
    double best = 0.0;
    DeterministicPolicyEnumerator(m).for_each([&](const std::vector<Outcome>& out) {
        double p = 0.0;
        for (const auto& o : out)
            if (o.s + m.terminal[static_cast<std::size_t>(o.x)] >= t - 1e-9)
                p += o.p;
        best = std::max(best, p);
    });
    return best;
}

/// max over deterministic history-dependent policies of E[R_{N-1} + g(X_N)].
inline double best_expected_total(const distdp::MdpModel& m) {
    double best = -1e300;
    DeterministicPolicyEnumerator(m).for_each([&](const std::vector<Outcome>& out) {
        double v = 0.0;
        for (const auto& o : out)
            v += o.p * (o.s + m.terminal[static_cast<std::size_t>(o.x)]);
        best = std::max(best, v);
    });
    return best;
}

} // namespace testgen
