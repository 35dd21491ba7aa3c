#include "distdp/solver.hpp"

#include "distdp/errors.hpp"
#include "distdp/lifted.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace distdp {

namespace {

// Strict improvement needed to replace an incumbent, so that the lowest
// action index wins ties.
constexpr double kTieTolerance = 1e-12;

std::shared_ptr<const RewardSupport> ensure_support(const MdpModel& model,
                                                    std::shared_ptr<const RewardSupport> support,
                                                    std::size_t cap = kDefaultSupportCap) {
    if (support)
        return support;
    return std::make_shared<const RewardSupport>(compute_reward_support(model, cap));
}

} // namespace

std::string to_string(Strategy s) {
    switch (s) {
    case Strategy::Auto: return "auto";
    case Strategy::Exhaustive: return "exhaustive";
    case Strategy::CoordinateAscent: return "coordinate_ascent";
    case Strategy::LinearDecomposition: return "linear_decomposition";
    }
    return "unknown";
}

double ValueTables::initial_value(const MdpModel& model) const {
    double v = 0.0;
    for (int x = 0; x < model.num_states; ++x)
        v += model.initial[static_cast<std::size_t>(x)] * value(0, x, 0);
    return v;
}

ValueTables linear_terminal_dp(const MdpModel& model, std::vector<double> weights,
                               std::shared_ptr<const RewardSupport> support) {
    require_valid(model);
    support = ensure_support(model, std::move(support));
    const int N = model.horizon;
    const auto E = static_cast<std::size_t>(model.num_states);
    if (weights.size() != E * support->size(N))
        throw ShapeError("terminal weights must cover E x S_N");

    ValueTables t;
    t.support = support;
    t.values.resize(static_cast<std::size_t>(N) + 1);
    t.argmax.resize(static_cast<std::size_t>(N));
    t.values[static_cast<std::size_t>(N)] = std::move(weights);

    for (int n = N - 1; n >= 0; --n) {
        const std::size_t S = support->size(n);
        const std::size_t S_next = support->size(n + 1);
        const auto& next = t.values[static_cast<std::size_t>(n) + 1];
        auto& cur = t.values[static_cast<std::size_t>(n)];
        auto& arg = t.argmax[static_cast<std::size_t>(n)];
        cur.assign(E * S, 0.0);
        arg.assign(E * S, 0);
        for (std::size_t x = 0; x < E; ++x)
            for (std::size_t s = 0; s < S; ++s) {
                double best = -std::numeric_limits<double>::infinity();
                int best_a = 0;
                for (int a = 0; a < model.num_actions; ++a) {
                    const std::size_t s2 = support->successor(n, s, static_cast<int>(x), a);
                    const auto q = model.transition_row(static_cast<int>(x), a);
                    double v = 0.0;
                    for (std::size_t xn = 0; xn < E; ++xn)
                        v += q[xn] * next[xn * S_next + s2];
                    if (v > best + kTieTolerance || a == 0) {
                        best = v;
                        best_a = a;
                    }
                }
                cur[x * S + s] = best;
                arg[x * S + s] = best_a;
            }
    }
    return t;
}

ValueTables linear_terminal_dp(const MdpModel& model, const ObjectiveFunctional& objective,
                               std::shared_ptr<const RewardSupport> support) {
    require_valid(model);
    support = ensure_support(model, std::move(support));
    return linear_terminal_dp(model, objective.linear_weights(*support, model.horizon, model), support);
}

ValueTables classical_bellman(const MdpModel& model) {
    require_valid(model);
    const int N = model.horizon;
    const auto E = static_cast<std::size_t>(model.num_states);
    ValueTables t;
    t.values.resize(static_cast<std::size_t>(N) + 1);
    t.argmax.resize(static_cast<std::size_t>(N));
    t.values[static_cast<std::size_t>(N)] = model.terminal;
    for (int n = N - 1; n >= 0; --n) {
        const auto& next = t.values[static_cast<std::size_t>(n) + 1];
        auto& cur = t.values[static_cast<std::size_t>(n)];
        auto& arg = t.argmax[static_cast<std::size_t>(n)];
        cur.assign(E, 0.0);
        arg.assign(E, 0);
        for (std::size_t x = 0; x < E; ++x) {
            double best = -std::numeric_limits<double>::infinity();
            int best_a = 0;
            for (int a = 0; a < model.num_actions; ++a) {
                const auto q = model.transition_row(static_cast<int>(x), a);
                double v = model.reward(n, static_cast<int>(x), a);
                for (std::size_t xn = 0; xn < E; ++xn)
                    v += q[xn] * next[xn];
                if (v > best + kTieTolerance || a == 0) {
                    best = v;
                    best_a = a;
                }
            }
            cur[x] = best;
            arg[x] = best_a;
        }
    }
    return t;
}

ValueTables quantile_dp(const MdpModel& model, double threshold, std::shared_ptr<const RewardSupport> support) {
    return linear_terminal_dp(model, ObjectiveFunctional::threshold(threshold), std::move(support));
}

double exhaustive_search_size_log10(const MdpModel& model, const RewardSupport& support) {
    // Rows (x, s) reachable at stage n under some action choice.
    const auto E = static_cast<std::size_t>(model.num_states);
    std::vector<char> reach(E, 0);
    for (std::size_t x = 0; x < E; ++x)
        reach[x] = model.initial[x] > 0.0;
    double log_count = 0.0;
    for (int n = 0; n < model.horizon; ++n) {
        const std::size_t S = support.size(n);
        const std::size_t S_next = support.size(n + 1);
        std::size_t rows = 0;
        std::vector<char> next(E * S_next, 0);
        for (std::size_t x = 0; x < E; ++x)
            for (std::size_t s = 0; s < S; ++s) {
                if (!reach[x * S + s])
                    continue;
                ++rows;
                for (int a = 0; a < model.num_actions; ++a) {
                    const std::size_t s2 = support.successor(n, s, static_cast<int>(x), a);
                    for (std::size_t xn = 0; xn < E; ++xn)
                        if (model.prob(static_cast<int>(x), a, static_cast<int>(xn)) > 0.0)
                            next[xn * S_next + s2] = 1;
                }
            }
        log_count += static_cast<double>(rows) * std::log10(static_cast<double>(model.num_actions));
        reach = std::move(next);
    }
    return log_count;
}

namespace {

using Key = std::vector<std::int64_t>;

Key quantize(const JointDistribution& F, double quantum) {
    const auto d = F.data();
    Key k(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        k[i] = std::llround(d[i] / quantum);
    return k;
}

// Lexicographic successor with the last digit varying fastest.
bool advance(std::vector<int>& digits, int radix) {
    for (std::size_t pos = digits.size(); pos-- > 0;) {
        if (++digits[pos] < radix)
            return true;
        digits[pos] = 0;
    }
    return false;
}

std::vector<std::pair<int, std::size_t>> mass_rows(const JointDistribution& F) {
    std::vector<std::pair<int, std::size_t>> rows;
    for (int x = 0; x < F.num_states(); ++x)
        for (std::size_t s = 0; s < F.num_rewards(); ++s)
            if (F(x, s) > 0.0)
                rows.emplace_back(x, s);
    return rows;
}

class ExhaustiveSearch {
public:
    ExhaustiveSearch(const MdpModel& model, const ObjectiveFunctional& objective, const SolverOptions& options)
        : model_(model), objective_(objective), options_(options) {}

    struct Entry {
        double score;
        KernelAction kernel;
    };

    double solve(const JointDistribution& F) {
        const int n = F.stage();
        if (n == model_.horizon)
            return objective_.score(F, model_);
        Key key = quantize(F, options_.memo_quantum);
        auto& memo = memo_[static_cast<std::size_t>(n)];
        if (auto it = memo.find(key); it != memo.end())
            return it->second.score;

        const auto rows = mass_rows(F);
        std::vector<int> choice(rows.size(), 0);
        KernelAction kernel = KernelAction::constant(F.num_states(), F.num_rewards(), model_.num_actions, 0);
        Entry best{-std::numeric_limits<double>::infinity(), kernel};
        bool first = true;
        do {
            for (std::size_t r = 0; r < rows.size(); ++r)
                kernel.set_deterministic(rows[r].first, rows[r].second, choice[r]);
            ++nodes_;
            const double v = solve(apply_transition(F, kernel, model_));
            if (first || v > best.score + kTieTolerance) {
                best.score = v;
                best.kernel = kernel;
                first = false;
            }
        } while (advance(choice, model_.num_actions));
        const double score = best.score;
        memo.emplace(std::move(key), std::move(best));
        return score;
    }

    SolveReport run(const JointDistribution& F0) {
        memo_.assign(static_cast<std::size_t>(model_.horizon), {});
        SolveReport rep;
        rep.score = solve(F0);
        rep.trajectory.push_back(F0);
        for (int n = 0; n < model_.horizon; ++n) {
            const auto& F = rep.trajectory.back();
            const auto& entry = memo_[static_cast<std::size_t>(n)].at(quantize(F, options_.memo_quantum));
            rep.actions.push_back(entry.kernel);
            rep.trajectory.push_back(apply_transition(F, entry.kernel, model_));
        }
        rep.stats.nodes_expanded = nodes_;
        return rep;
    }

private:
    const MdpModel& model_;
    const ObjectiveFunctional& objective_;
    const SolverOptions& options_;
    std::vector<std::map<Key, Entry>> memo_;
    std::size_t nodes_ = 0;
};

class CoordinateAscent {
public:
    CoordinateAscent(const MdpModel& model, const ObjectiveFunctional& objective, const SolverOptions& options,
                     std::shared_ptr<const RewardSupport> support)
        : model_(model), objective_(objective), options_(options), support_(std::move(support)) {}

    SolveReport run(const JointDistribution& F0) {
        std::mt19937_64 rng(options_.seed);
        SolveReport best;
        best.score = -std::numeric_limits<double>::infinity();
        const int starts = std::max(1, options_.restarts);
        for (int start = 0; start < starts; ++start) {
            LiftedActionSequence seq = initial_sequence(start, rng);
            auto traj = simulate(F0, seq, model_);
            double score = objective_.score(traj.back(), model_);
            for (int sweep = 0; sweep < options_.max_sweeps; ++sweep) {
                const double before = score;
                for (int n = 0; n < model_.horizon; ++n)
                    improve_stage(n, seq, traj, score);
                if (best.actions.empty() || score > best.score + kTieTolerance) {
                    best.score = score;
                    best.actions = seq;
                    best.trajectory = traj;
                }
                best.stats.best_so_far.push_back(best.score);
                if (score - before < options_.improvement_tolerance)
                    break;
            }
        }
        best.stats.restarts = starts;
        best.stats.nodes_expanded = evaluations_;
        return best;
    }

private:
    LiftedActionSequence initial_sequence(int start, std::mt19937_64& rng) {
        // Start 0 plays action 0 everywhere, start 1 is uniform, later starts
        // alternate random deterministic and random stochastic kernels.
        const bool deterministic = options_.deterministic_rows;
        LiftedActionSequence seq;
        for (int n = 0; n < model_.horizon; ++n) {
            const std::size_t S = support_->size(n);
            if (start == 0) {
                seq.push_back(KernelAction::constant(model_.num_states, S, model_.num_actions, 0));
                continue;
            }
            KernelAction k(model_.num_states, S, model_.num_actions);
            if (start == 1 && !deterministic) {
                seq.push_back(std::move(k));
                continue;
            }
            for (int x = 0; x < model_.num_states; ++x)
                for (std::size_t s = 0; s < S; ++s) {
                    auto row = k.row(x, s);
                    if (deterministic || start % 2 == 0) {
                        k.set_deterministic(x, s, static_cast<int>(rng() % static_cast<std::uint64_t>(model_.num_actions)));
                    } else {
                        double total = 0.0;
                        for (double& p : row)
                            total += (p = static_cast<double>(rng() >> 11) * 0x1.0p-53 + 1e-3);
                        for (double& p : row)
                            p /= total;
                    }
                }
            seq.push_back(std::move(k));
        }
        return seq;
    }

    std::vector<JointDistribution> rollout(const JointDistribution& from, const LiftedActionSequence& seq, int n) {
        std::vector<JointDistribution> tail;
        tail.reserve(static_cast<std::size_t>(model_.horizon - n));
        const JointDistribution* cur = &from;
        for (int k = n; k < model_.horizon; ++k) {
            tail.push_back(apply_transition(*cur, seq[static_cast<std::size_t>(k)], model_));
            cur = &tail.back();
        }
        ++evaluations_;
        return tail;
    }

    void improve_stage(int n, LiftedActionSequence& seq, std::vector<JointDistribution>& traj, double& score) {
        const auto A = static_cast<std::size_t>(model_.num_actions);
        const auto rows = mass_rows(traj[static_cast<std::size_t>(n)]);
        for (const auto& [x, s] : rows) {
            auto row = seq[static_cast<std::size_t>(n)].row(x, s);
            const std::vector<double> current(row.begin(), row.end());
            std::vector<double> best_row = current;
            std::vector<JointDistribution> best_tail;
            double best_score = score;

            std::vector<std::vector<double>> candidates;
            for (std::size_t a = 0; a < A; ++a) {
                std::vector<double> vertex(A, 0.0);
                vertex[a] = 1.0;
                for (double w : {1.0, 0.5}) {
                    if (w < 1.0 && options_.deterministic_rows)
                        continue;
                    std::vector<double> c(A);
                    for (std::size_t i = 0; i < A; ++i)
                        c[i] = w * vertex[i] + (1.0 - w) * current[i];
                    candidates.push_back(std::move(c));
                }
            }
            for (const auto& c : candidates) {
                std::copy(c.begin(), c.end(), row.begin());
                auto tail = rollout(traj[static_cast<std::size_t>(n)], seq, n);
                const double v = objective_.score(tail.back(), model_);
                if (v > best_score + options_.improvement_tolerance) {
                    best_score = v;
                    best_row = c;
                    best_tail = std::move(tail);
                }
            }
            std::copy(best_row.begin(), best_row.end(), row.begin());
            if (!best_tail.empty()) {
                score = best_score;
                for (std::size_t k = 0; k < best_tail.size(); ++k)
                    traj[static_cast<std::size_t>(n) + 1 + k] = std::move(best_tail[k]);
            }
        }
    }

    const MdpModel& model_;
    const ObjectiveFunctional& objective_;
    const SolverOptions& options_;
    std::shared_ptr<const RewardSupport> support_;
    std::size_t evaluations_ = 0;
};

SolveReport solve_linear(const MdpModel& model, const ObjectiveFunctional& objective,
                         std::shared_ptr<const RewardSupport> support, const JointDistribution& F0) {
    const auto tables = linear_terminal_dp(model, objective, support);
    SolveReport rep;
    for (int n = 0; n < model.horizon; ++n) {
        KernelAction k(model.num_states, support->size(n), model.num_actions);
        for (int x = 0; x < model.num_states; ++x)
            for (std::size_t s = 0; s < support->size(n); ++s)
                k.set_deterministic(x, s, tables.action(n, x, s));
        rep.actions.push_back(std::move(k));
    }
    rep.trajectory = simulate(F0, rep.actions, model);
    rep.score = objective.score(rep.trajectory.back(), model);
    rep.stats.nodes_expanded = 0;
    for (int n = 0; n < model.horizon; ++n)
        rep.stats.nodes_expanded += static_cast<std::size_t>(model.num_states) * support->size(n);
    return rep;
}

} // namespace

SolveReport lifted_value_iteration(const MdpModel& model, const ObjectiveFunctional& objective,
                                   const SolverOptions& options) {
    require_valid(model);
    const auto& reg = objective.regularity();
    if (!reg.upper_semicontinuous && !reg.lipschitz)
        throw ValidationError("objective '" + objective.name() +
                              "' declares neither upper semicontinuity nor a Lipschitz constant");

    auto support = std::make_shared<const RewardSupport>(compute_reward_support(model, options.support_cap));
    const auto F0 = JointDistribution::initial(support, model.initial);

    Strategy strategy = options.strategy;
    const double budget_log10 = std::log10(options.exhaustive_budget);
    if (strategy == Strategy::Auto) {
        if (objective.is_linear())
            strategy = Strategy::LinearDecomposition;
        else if (exhaustive_search_size_log10(model, *support) <= budget_log10)
            strategy = Strategy::Exhaustive;
        else
            strategy = Strategy::CoordinateAscent;
    }

    SolveReport rep;
    switch (strategy) {
    case Strategy::LinearDecomposition:
        if (!objective.is_linear())
            throw ValidationError("linear decomposition requires a linear objective");
        rep = solve_linear(model, objective, support, F0);
        rep.stats.certified = true;
        break;
    case Strategy::Exhaustive: {
        const double size = exhaustive_search_size_log10(model, *support);
        if (size > budget_log10)
            throw BudgetExceeded("exhaustive kernel search needs 10^" + std::to_string(size) +
                                 " sequences (budget " + std::to_string(options.exhaustive_budget) + ")");
        rep = ExhaustiveSearch(model, objective, options).run(F0);
        // Exact over deterministic kernels; globally exact only for linear H.
        rep.stats.certified = objective.is_linear();
        break;
    }
    case Strategy::CoordinateAscent:
        rep = CoordinateAscent(model, objective, options, support).run(F0);
        rep.stats.certified = false;
        break;
    case Strategy::Auto:
        break;
    }
    rep.stats.strategy = to_string(strategy);
    rep.value = objective.from_score(rep.score);
    if (rep.stats.best_so_far.empty())
        rep.stats.best_so_far.push_back(rep.score);

    if (history_count(model.num_states, model.num_actions, model.horizon - 1) * model.num_actions <=
        options.projection_cap)
        rep.policy = policy_project(rep.actions, model, *support);
    return rep;
}

} // namespace distdp
