#pragma once

#include "distdp/distribution.hpp"
#include "distdp/enumeration.hpp"
#include "distdp/model.hpp"
#include "distdp/policy.hpp"

#include <memory>
#include <span>
#include <vector>

namespace distdp {

/**
 * Lifted transition T^pi:
 *
 *   T^pi(F)(x', s') = sum over (x, s, a) with r_n(x, a) = s' - s of
 *                     q(x' | x, a) pi(a | x, s) F(x, s).
 *
 * `F` must be at stage n and `pi` indexed by S_n; the result lives at n+1.
 */
JointDistribution apply_transition(const JointDistribution& F, const KernelAction& pi, const MdpModel& model);

/// Marginal transition on P(E): T^pi(F)(x') = sum_{x,a} q(x'|x,a) pi(a|x) F(x).
/// `pi` is indexed [x][a].
std::vector<double> apply_marginal_transition(std::span<const double> F, std::span<const double> pi,
                                              const MdpModel& model);

/// pi~(a|x) = sum_s pi(a|x,s) F(x,s) / F(x,S); rows with F(x,S)=0 become uniform.
std::vector<double> collapse_kernel(const JointDistribution& F, const KernelAction& pi);

/// F_0, T^{pi_0}(F_0), ..., the full trajectory of length seq.size()+1.
std::vector<JointDistribution> simulate(const JointDistribution& F0, const LiftedActionSequence& seq,
                                        const MdpModel& model);

/**
 * Kernels pi_n(a|x,s) = P(A_n = a | X_n = x, R_{n-1} = s) computed by path
 * enumeration, so that pushing nu (x) delta_0 through them reproduces the
 * policy's joint distributions. Rows on null events are uniform.
 */
LiftedActionSequence policy_lift(const MdpModel& model, const HistoryPolicy& policy,
                                 std::shared_ptr<const RewardSupport> support = nullptr,
                                 double cap = kDefaultPathCap);

/// sigma_n(a | h_n) = pi_n(a | x_n, sum_{k<n} r_k(x_k, a_k)).
HistoryPolicy policy_project(const LiftedActionSequence& seq, const MdpModel& model,
                             const RewardSupport& support);

} // namespace distdp
