#include "distdp/enumeration.hpp"

#include "distdp/errors.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace distdp {

double path_count(const MdpModel& model, int stages) {
    return history_count(model.num_states, model.num_actions, stages);
}

void require_enumerable(const MdpModel& model, int stages, double cap) {
    const double paths = path_count(model, stages);
    if (paths > cap) {
        std::ostringstream os;
        os << "path enumeration over " << stages << " stages needs " << paths << " paths (cap " << cap << ")";
        throw BudgetExceeded(os.str());
    }
}

namespace {

struct Walker {
    const MdpModel& model;
    const RewardSupport& support;
    const HistoryPolicy& policy;
    int stages;
    const PathVisitor& visitor;
    std::vector<int> history;

    void visit(int n, double prob, std::size_t s) {
        if (visitor.on_state)
            visitor.on_state(n, history, prob, s);
        if (n == stages)
            return;
        const int x = history.back();
        const auto rule = policy.probs(n, history);
        for (int a = 0; a < model.num_actions; ++a) {
            const double pa = prob * rule[static_cast<std::size_t>(a)];
            if (pa == 0.0)
                continue;
            if (visitor.on_action)
                visitor.on_action(n, history, pa, s, a);
            const std::size_t s_next = support.successor(n, s, x, a);
            history.push_back(a);
            for (int xn = 0; xn < model.num_states; ++xn) {
                const double q = model.prob(x, a, xn);
                if (q == 0.0)
                    continue;
                history.push_back(xn);
                visit(n + 1, pa * q, s_next);
                history.pop_back();
            }
            history.pop_back();
        }
    }
};

} // namespace

void enumerate_paths(const MdpModel& model, const RewardSupport& support, const HistoryPolicy& policy,
                     int stages, const PathVisitor& visitor, double cap) {
    if (stages < 0 || stages > model.horizon || stages > support.horizon())
        throw ShapeError("enumeration depth outside the horizon");
    if (policy.horizon() < stages || policy.num_states() != model.num_states ||
        policy.num_actions() != model.num_actions)
        throw ShapeError("policy does not match the model");
    require_enumerable(model, stages, cap);

    Walker w{model, support, policy, stages, visitor, {}};
    w.history.reserve(static_cast<std::size_t>(2 * stages + 1));
    for (int x0 = 0; x0 < model.num_states; ++x0) {
        const double p0 = model.initial[static_cast<std::size_t>(x0)];
        if (p0 == 0.0)
            continue;
        w.history.assign(1, x0);
        w.visit(0, p0, 0);
    }
}

JointDistribution exact_joint_distribution(const MdpModel& model, const HistoryPolicy& policy, int n,
                                           std::shared_ptr<const RewardSupport> support, double cap) {
    if (n < 1 || n > model.horizon) {
        std::ostringstream os;
        os << "stage " << n << " outside 1.." << model.horizon;
        throw ShapeError(os.str());
    }
    if (!support)
        support = std::make_shared<const RewardSupport>(compute_reward_support(model));
    JointDistribution f(support, n);
    PathVisitor v;
    v.on_state = [&](int stage, std::span<const int> h, double p, std::size_t s) {
        if (stage == n)
            f(h.back(), s) += p;
    };
    enumerate_paths(model, *support, policy, n, v, cap);
    return f;
}

} // namespace distdp
