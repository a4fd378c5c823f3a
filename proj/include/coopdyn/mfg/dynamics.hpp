#pragma once

#include <stdexcept>
#include <vector>

#include "coopdyn/mfg/model.hpp"
#include "coopdyn/mfg/tables.hpp"

namespace coopdyn::mfg {

/// One step of the mean-field flow:
///   P(j, t+1) = sum_a sum_j' Pr[a + Bin(N-1, pi(move|j')) = j] P(j', t) pi(a|j').
template <typename Scalar>
StateDistribution<Scalar> evolve_distribution(const StateDistribution<Scalar>& P_t,
                                              const ActionMatrix<Scalar>& pi_t,
                                              const MfgParams<Scalar>& params) {
  const int N = params.N;
  if (P_t.size() != N + 1 || pi_t.rows() != N + 1)
    throw std::invalid_argument("evolve_distribution: size mismatch with N + 1");
  BinomialPmf<Scalar> peers(N - 1);
  Vector<Scalar> next = Vector<Scalar>::Zero(N + 1);
  for (int jp = 0; jp <= N; ++jp) {
    const Scalar mass = P_t[jp];
    if (mass == Scalar(0)) continue;
    const auto& pmf = peers(pi_t(jp, kMove));
    next.segment(0, N) += (mass * pi_t(jp, kWait)) * pmf;
    next.segment(1, N) += (mass * pi_t(jp, kMove)) * pmf;
  }
  return renormalized(std::move(next), "evolve_distribution");
}

/// P(., t) for t = 0..H under `pi`, starting from the initial distribution.
template <typename Scalar>
std::vector<StateDistribution<Scalar>> forward_flow(const PolicyTable<Scalar>& pi,
                                                    const MfgParams<Scalar>& params) {
  std::vector<StateDistribution<Scalar>> flow;
  flow.reserve(pi.horizon() + 1);
  flow.push_back(StateDistribution<Scalar>::from_probs(params.initial_probs()));
  for (int t = 0; t < pi.horizon(); ++t)
    flow.push_back(evolve_distribution(flow.back(), pi.slice(t), params));
  return flow;
}

namespace detail {

enum class Continuation { Greedy, OnPolicy };

template <typename Scalar>
ActionValueTable<Scalar> backward_pass(const PolicyTable<Scalar>& pi, const MfgParams<Scalar>& params,
                                       Continuation mode) {
  const int N = params.N;
  const int H = pi.horizon();
  const ActionMatrix<Scalar> U = utility_matrix(params);
  BinomialPmf<Scalar> peers(N - 1);

  ActionValueTable<Scalar> out;
  out.q.assign(H + 1, ActionMatrix<Scalar>::Zero(N + 1, 2));
  out.v.assign(H + 1, Vector<Scalar>::Zero(N + 1));
  for (int t = H - 1; t >= 0; --t) {
    const Vector<Scalar>& v_next = out.v[t + 1];
    auto& q = out.q[t];
    auto& v = out.v[t];
    const auto& pt = pi.slice(t);
    for (int j = 0; j <= N; ++j) {
      const auto& pmf = peers(pt(j, kMove));
      q(j, kWait) = U(j, kWait) + params.delta * pmf.dot(v_next.segment(0, N));
      q(j, kMove) = U(j, kMove) + params.delta * pmf.dot(v_next.segment(1, N));
      v(j) = mode == Continuation::Greedy
                 ? q(j, greedy_action(q(j, kWait), q(j, kMove)))
                 : pt(j, kWait) * q(j, kWait) + pt(j, kMove) * q(j, kMove);
    }
    if (!q.allFinite()) throw NumericalIntegrityError("bellman: non-finite action value");
  }
  return out;
}

}  // namespace detail

/// Backward induction with greedy continuation. Peers move with the population
/// policy pi(move | j, t); the representative agent's own action shifts the
/// next count by a. The flow fixes the horizon; the recursion conditions on
/// the realized count j, so its values do not enter.
template <typename Scalar>
ActionValueTable<Scalar> bellman_backward(const std::vector<StateDistribution<Scalar>>& flow,
                                          const PolicyTable<Scalar>& pi,
                                          const MfgParams<Scalar>& params) {
  if (pi.horizon() != params.horizon || static_cast<int>(flow.size()) != params.horizon + 1)
    throw std::invalid_argument("bellman_backward: horizon mismatch between params, flow and policy");
  if (pi.N() != params.N) throw std::invalid_argument("bellman_backward: policy size != N + 1");
  return detail::backward_pass(pi, params, detail::Continuation::Greedy);
}

/// Value of following `pi` itself against a population also playing `pi`.
template <typename Scalar>
ActionValueTable<Scalar> policy_evaluation(const PolicyTable<Scalar>& pi, const MfgParams<Scalar>& params) {
  if (pi.horizon() != params.horizon || pi.N() != params.N)
    throw std::invalid_argument("policy_evaluation: shape mismatch");
  return detail::backward_pass(pi, params, detail::Continuation::OnPolicy);
}

/// SoftMax of every (t, j) row of q.
template <typename Scalar>
PolicyTable<Scalar> softmax_table(const ActionValueTable<Scalar>& values, Scalar tau) {
  std::vector<ActionMatrix<Scalar>> slices;
  slices.reserve(values.horizon());
  for (int t = 0; t < values.horizon(); ++t) {
    const auto& q = values.q[t];
    ActionMatrix<Scalar> s(q.rows(), 2);
    for (Eigen::Index j = 0; j < q.rows(); ++j) s.row(j) = softmax_policy<Scalar>(q.row(j), tau);
    slices.push_back(std::move(s));
  }
  return PolicyTable<Scalar>(std::move(slices));
}

}  // namespace coopdyn::mfg
