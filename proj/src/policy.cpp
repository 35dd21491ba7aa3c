#include "distdp/policy.hpp"

#include "distdp/errors.hpp"

#include <cmath>
#include <sstream>

namespace distdp {

double history_count(int num_states, int num_actions, int stage) {
    return std::pow(static_cast<double>(num_states), stage + 1) *
           std::pow(static_cast<double>(num_actions), stage);
}

HistoryPolicy::HistoryPolicy(int num_states, int num_actions, int horizon)
    : num_states_(num_states), num_actions_(num_actions) {
    if (num_states < 1 || num_actions < 1 || horizon < 0)
        throw ShapeError("history policy needs at least one state and action");
    tables_.resize(static_cast<std::size_t>(horizon));
    for (int n = 0; n < horizon; ++n)
        tables_[static_cast<std::size_t>(n)].assign(num_histories(n) * static_cast<std::size_t>(num_actions),
                                                    1.0 / num_actions);
}

std::size_t HistoryPolicy::num_histories(int stage) const {
    std::size_t count = static_cast<std::size_t>(num_states_);
    for (int k = 0; k < stage; ++k)
        count *= static_cast<std::size_t>(num_states_) * static_cast<std::size_t>(num_actions_);
    return count;
}

std::size_t HistoryPolicy::history_index(std::span<const int> history) const {
    if (history.size() % 2 != 1)
        throw ShapeError("history must have odd length (x_0, a_0, ..., x_n)");
    std::size_t index = static_cast<std::size_t>(history[0]);
    for (std::size_t i = 1; i < history.size(); i += 2) {
        index = index * static_cast<std::size_t>(num_actions_) + static_cast<std::size_t>(history[i]);
        index = index * static_cast<std::size_t>(num_states_) + static_cast<std::size_t>(history[i + 1]);
    }
    return index;
}

std::span<const double> HistoryPolicy::probs(int stage, std::span<const int> history) const {
    if (history.size() != static_cast<std::size_t>(2 * stage + 1))
        throw ShapeError("history length does not match stage");
    return probs_at(stage, history_index(history));
}

std::span<double> HistoryPolicy::probs(int stage, std::span<const int> history) {
    if (history.size() != static_cast<std::size_t>(2 * stage + 1))
        throw ShapeError("history length does not match stage");
    return probs_at(stage, history_index(history));
}

namespace {

// Visits every history of length 2n+1 in index order.
void for_each_history(int num_states, int num_actions, int stage,
                      const std::function<void(std::span<const int>)>& visit) {
    std::vector<int> h(static_cast<std::size_t>(2 * stage + 1), 0);
    for (;;) {
        visit(h);
        int pos = static_cast<int>(h.size()) - 1;
        while (pos >= 0) {
            const int radix = (pos % 2 == 0) ? num_states : num_actions;
            if (++h[static_cast<std::size_t>(pos)] < radix)
                break;
            h[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0)
            return;
    }
}

} // namespace

HistoryPolicy HistoryPolicy::from_rule(int num_states, int num_actions, int horizon, const Rule& rule) {
    HistoryPolicy p(num_states, num_actions, horizon);
    for (int n = 0; n < horizon; ++n) {
        for_each_history(num_states, num_actions, n, [&](std::span<const int> h) {
            auto row = rule(n, h);
            if (row.size() != static_cast<std::size_t>(num_actions))
                throw ShapeError("policy rule returned a row of the wrong size");
            auto dst = p.probs(n, h);
            std::copy(row.begin(), row.end(), dst.begin());
        });
    }
    return p;
}

HistoryPolicy HistoryPolicy::markov(int num_states, int num_actions, int horizon,
                                    const std::function<std::vector<double>(int, int)>& rule) {
    return from_rule(num_states, num_actions, horizon,
                     [&](int n, std::span<const int> h) { return rule(n, h.back()); });
}

std::optional<std::string> HistoryPolicy::validate() const {
    for (std::size_t n = 0; n < tables_.size(); ++n) {
        const auto& t = tables_[n];
        for (std::size_t row = 0; row * num_actions_ < t.size(); ++row) {
            double sum = 0.0;
            for (int a = 0; a < num_actions_; ++a) {
                const double p = t[row * num_actions_ + static_cast<std::size_t>(a)];
                if (!std::isfinite(p) || p < 0.0) {
                    std::ostringstream os;
                    os << "policy stage " << n << " history " << row << ": negative probability";
                    return os.str();
                }
                sum += p;
            }
            if (std::abs(sum - 1.0) > kMassTolerance) {
                std::ostringstream os;
                os << "policy stage " << n << " history " << row << ": row sum " << sum;
                return os.str();
            }
        }
    }
    return std::nullopt;
}

} // namespace distdp
