#include "distdp/lifted.hpp"

#include "distdp/errors.hpp"

#include <sstream>

namespace distdp {

JointDistribution apply_transition(const JointDistribution& F, const KernelAction& pi, const MdpModel& model) {
    const int n = F.stage();
    const RewardSupport& sup = F.support();
    if (n >= sup.horizon() || n >= model.horizon)
        throw ShapeError("cannot transition past the horizon");
    if (pi.num_states() != F.num_states() || pi.num_rewards() != F.num_rewards() ||
        pi.num_actions() != model.num_actions || model.num_states != F.num_states())
        throw ShapeError("kernel is not indexed by the distribution's reward support");

    JointDistribution out(F.support_ptr(), n + 1);
    for (int x = 0; x < model.num_states; ++x)
        for (std::size_t s = 0; s < F.num_rewards(); ++s) {
            const double m = F(x, s);
            if (m == 0.0)
                continue;
            const auto row = pi.row(x, s);
            for (int a = 0; a < model.num_actions; ++a) {
                const double ma = m * row[static_cast<std::size_t>(a)];
                if (ma == 0.0)
                    continue;
                const std::size_t s_next = sup.successor(n, s, x, a);
                const auto q = model.transition_row(x, a);
                for (int xn = 0; xn < model.num_states; ++xn)
                    out(xn, s_next) += q[static_cast<std::size_t>(xn)] * ma;
            }
        }
    return out;
}

std::vector<double> apply_marginal_transition(std::span<const double> F, std::span<const double> pi,
                                              const MdpModel& model) {
    const auto E = static_cast<std::size_t>(model.num_states);
    const auto A = static_cast<std::size_t>(model.num_actions);
    if (F.size() != E || pi.size() != E * A)
        throw ShapeError("marginal transition inputs have wrong shape");
    std::vector<double> out(E, 0.0);
    for (std::size_t x = 0; x < E; ++x) {
        if (F[x] == 0.0)
            continue;
        for (std::size_t a = 0; a < A; ++a) {
            const double w = F[x] * pi[x * A + a];
            if (w == 0.0)
                continue;
            const auto q = model.transition_row(static_cast<int>(x), static_cast<int>(a));
            for (std::size_t xn = 0; xn < E; ++xn)
                out[xn] += q[xn] * w;
        }
    }
    return out;
}

std::vector<double> collapse_kernel(const JointDistribution& F, const KernelAction& pi) {
    const auto E = static_cast<std::size_t>(F.num_states());
    const auto A = static_cast<std::size_t>(pi.num_actions());
    std::vector<double> out(E * A, 0.0);
    for (std::size_t x = 0; x < E; ++x) {
        double mass = 0.0;
        for (std::size_t s = 0; s < F.num_rewards(); ++s) {
            const double m = F(static_cast<int>(x), s);
            mass += m;
            const auto row = pi.row(static_cast<int>(x), s);
            for (std::size_t a = 0; a < A; ++a)
                out[x * A + a] += row[a] * m;
        }
        for (std::size_t a = 0; a < A; ++a)
            out[x * A + a] = mass > 0.0 ? out[x * A + a] / mass : 1.0 / static_cast<double>(A);
    }
    return out;
}

std::vector<JointDistribution> simulate(const JointDistribution& F0, const LiftedActionSequence& seq,
                                        const MdpModel& model) {
    std::vector<JointDistribution> traj;
    traj.reserve(seq.size() + 1);
    traj.push_back(F0);
    for (const auto& pi : seq)
        traj.push_back(apply_transition(traj.back(), pi, model));
    return traj;
}

LiftedActionSequence policy_lift(const MdpModel& model, const HistoryPolicy& policy,
                                 std::shared_ptr<const RewardSupport> support, double cap) {
    require_valid(model);
    if (auto err = policy.validate())
        throw ValidationError(*err);
    if (!support)
        support = std::make_shared<const RewardSupport>(compute_reward_support(model));
    const int N = model.horizon;

    // joint[n][(x, s, a)] = P(X_n = x, R_{n-1} = s, A_n = a).
    std::vector<KernelAction> joint;
    joint.reserve(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        KernelAction k(model.num_states, support->size(n), model.num_actions);
        for (int x = 0; x < model.num_states; ++x)
            for (std::size_t s = 0; s < support->size(n); ++s) {
                auto r = k.row(x, s);
                std::fill(r.begin(), r.end(), 0.0);
            }
        joint.push_back(std::move(k));
    }

    PathVisitor v;
    v.on_action = [&](int n, std::span<const int> h, double p, std::size_t s, int a) {
        joint[static_cast<std::size_t>(n)].row(h.back(), s)[static_cast<std::size_t>(a)] += p;
    };
    enumerate_paths(model, *support, policy, N, v, cap);

    for (auto& k : joint)
        for (int x = 0; x < k.num_states(); ++x)
            for (std::size_t s = 0; s < k.num_rewards(); ++s) {
                auto r = k.row(x, s);
                double mass = 0.0;
                for (double p : r)
                    mass += p;
                for (double& p : r)
                    p = mass > 0.0 ? p / mass : 1.0 / static_cast<double>(r.size());
            }
    return joint;
}

HistoryPolicy policy_project(const LiftedActionSequence& seq, const MdpModel& model,
                             const RewardSupport& support) {
    const int N = static_cast<int>(seq.size());
    if (N != model.horizon || N > support.horizon())
        throw ShapeError("action sequence must have one kernel per stage");
    for (int n = 0; n < N; ++n)
        if (seq[static_cast<std::size_t>(n)].num_rewards() != support.size(n))
            throw ShapeError("kernel at stage " + std::to_string(n) + " is not indexed by S_n");

    return HistoryPolicy::from_rule(
        model.num_states, model.num_actions, N, [&](int n, std::span<const int> h) {
            std::int64_t acc = 0;
            for (std::size_t i = 1; i < h.size(); i += 2)
                acc += support.reward_ticks(static_cast<int>(i / 2), h[i - 1], h[i]);
            auto s = support.index_of(n, acc);
            if (!s) {
                std::ostringstream os;
                os << "accumulated reward of history at stage " << n << " is not in S_" << n;
                throw ShapeError(os.str());
            }
            auto row = seq[static_cast<std::size_t>(n)].row(h.back(), *s);
            return std::vector<double>(row.begin(), row.end());
        });
}

} // namespace distdp
