#include "distdp/compact.hpp"

#include "distdp/errors.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace distdp {

std::vector<std::vector<double>> action_grid(const ContinuousActionModel& model, int state, int resolution) {
    if (resolution < 2)
        throw ValidationError("grid resolution must be at least 2 points per coordinate");
    const int d = model.action_dim();
    std::vector<std::vector<double>> grid;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> a(static_cast<std::size_t>(d));
    for (;;) {
        for (int k = 0; k < d; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            const double t = static_cast<double>(idx[kk]) / (resolution - 1);
            a[kk] = model.lower[kk] + t * (model.upper[kk] - model.lower[kk]);
        }
        if (!model.feasible || model.feasible(state, a))
            grid.push_back(a);
        int pos = d - 1;
        while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == resolution) {
            idx[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0)
            break;
    }
    return grid;
}

namespace {

struct GridAction {
    std::vector<double> action;
    std::vector<double> row;
};

class GridSearch {
public:
    GridSearch(const ContinuousActionModel& model, const std::function<double(std::span<const double>)>& terminal,
               int resolution, double budget)
        : model_(model), terminal_(terminal), budget_(budget) {
        const auto E = static_cast<std::size_t>(model.num_states);
        options_.resize(E);
        for (int x = 0; x < model.num_states; ++x) {
            for (auto& a : action_grid(model, x, resolution)) {
                GridAction g{a, std::vector<double>(E)};
                model.transition(x, a, g.row);
                options_[static_cast<std::size_t>(x)].push_back(std::move(g));
            }
            if (options_[static_cast<std::size_t>(x)].empty())
                throw ValidationError("grid has no feasible action for state " + std::to_string(x));
        }
        memo_.resize(static_cast<std::size_t>(model.horizon));
    }

    struct Entry {
        double value;
        std::vector<int> choice;
    };

    double solve(int n, const std::vector<double>& F) {
        if (n == model_.horizon)
            return terminal_(F);
        auto key = quantize(F);
        auto& memo = memo_[static_cast<std::size_t>(n)];
        if (auto it = memo.find(key); it != memo.end())
            return it->second.value;

        const auto E = static_cast<std::size_t>(model_.num_states);
        std::vector<std::size_t> active;
        for (std::size_t x = 0; x < E; ++x)
            if (F[x] > 0.0)
                active.push_back(x);

        std::vector<int> choice(E, 0);
        Entry best{-std::numeric_limits<double>::infinity(), choice};
        std::vector<double> next(E);
        bool first = true;
        for (;;) {
            if (static_cast<double>(++nodes_) > budget_)
                throw BudgetExceeded("grid value iteration exceeded its kernel budget");
            std::fill(next.begin(), next.end(), 0.0);
            double stage_reward = 0.0;
            for (std::size_t x : active) {
                const auto& g = options_[x][static_cast<std::size_t>(choice[x])];
                stage_reward += F[x] * model_.reward(n, static_cast<int>(x), g.action);
                for (std::size_t xn = 0; xn < E; ++xn)
                    next[xn] += g.row[xn] * F[x];
            }
            const double v = stage_reward + solve(n + 1, next);
            if (first || v > best.value + 1e-12) {
                best.value = v;
                best.choice = choice;
                first = false;
            }
            std::size_t k = active.size();
            while (k > 0) {
                const std::size_t x = active[k - 1];
                if (++choice[x] < static_cast<int>(options_[x].size()))
                    break;
                choice[x] = 0;
                --k;
            }
            if (k == 0)
                break;
        }
        const double value = best.value;
        memo.emplace(std::move(key), std::move(best));
        return value;
    }

    CompactSolveReport run(int resolution) {
        CompactSolveReport rep;
        rep.resolution = resolution;
        rep.value = solve(0, model_.initial);
        std::vector<double> F = model_.initial;
        rep.trajectory.push_back(F);
        const auto E = static_cast<std::size_t>(model_.num_states);
        for (int n = 0; n < model_.horizon; ++n) {
            const auto& entry = memo_[static_cast<std::size_t>(n)].at(quantize(F));
            std::vector<std::vector<double>> acts;
            std::vector<double> next(E, 0.0);
            double stage_reward = 0.0;
            for (std::size_t x = 0; x < E; ++x) {
                const auto& g = options_[x][static_cast<std::size_t>(entry.choice[x])];
                acts.push_back(g.action);
                if (F[x] == 0.0)
                    continue;
                stage_reward += F[x] * model_.reward(n, static_cast<int>(x), g.action);
                for (std::size_t xn = 0; xn < E; ++xn)
                    next[xn] += g.row[xn] * F[x];
            }
            rep.actions.push_back(std::move(acts));
            rep.stage_rewards.push_back(stage_reward);
            F = std::move(next);
            rep.trajectory.push_back(F);
        }
        rep.nodes_expanded = nodes_;
        return rep;
    }

private:
    static std::vector<std::int64_t> quantize(const std::vector<double>& F) {
        std::vector<std::int64_t> k(F.size());
        for (std::size_t i = 0; i < F.size(); ++i)
            k[i] = std::llround(F[i] * 1e9);
        return k;
    }

    const ContinuousActionModel& model_;
    const std::function<double(std::span<const double>)>& terminal_;
    double budget_;
    std::vector<std::vector<GridAction>> options_;
    std::vector<std::map<std::vector<std::int64_t>, Entry>> memo_;
    std::size_t nodes_ = 0;
};

} // namespace

CompactSolveReport compact_grid_value_iteration(const ContinuousActionModel& model,
                                                const std::function<double(std::span<const double>)>& terminal,
                                                int resolution, double budget) {
    if (model.num_states < 1 || model.horizon < 1 || model.lower.size() != model.upper.size() ||
        model.lower.empty() || model.initial.size() != static_cast<std::size_t>(model.num_states))
        throw ValidationError("continuous-action model has inconsistent shape");
    if (!model.reward || !model.transition)
        throw ValidationError("continuous-action model needs reward and transition functions");
    GridSearch search(model, terminal, resolution, budget);
    return search.run(resolution);
}

} // namespace distdp
