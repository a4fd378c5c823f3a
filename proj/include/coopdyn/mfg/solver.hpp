#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "coopdyn/mfg/dynamics.hpp"

namespace coopdyn::mfg {

struct Residual {
  double policy;
  double distribution;
};

template <typename Scalar = double>
struct EquilibriumResult {
  PolicyTable<Scalar> policy;
  std::vector<StateDistribution<Scalar>> distribution_flow;  // t = 0..H
  ActionValueTable<Scalar> values;
  int iterations = 0;
  std::vector<Residual> residual_history;
  bool converged = false;
  // Residuals never rose after the warm-up iterations.
  bool monotone = true;
  Scalar exploitability{};
  // Greedy best-response value minus the value of pi itself (no entropy
  // term). Strictly positive for any nondegenerate softmax policy.
  Scalar greedy_gap{};
};

/// Iterations exempt from the residual monotonicity check.
inline constexpr int kMonotoneWarmup = 5;

template <typename Scalar>
Scalar distribution_distance(const std::vector<StateDistribution<Scalar>>& a,
                             const std::vector<StateDistribution<Scalar>>& b) {
  Scalar d(0);
  for (std::size_t t = 0; t < a.size(); ++t)
    d = std::max(d, (a[t].probs() - b[t].probs()).cwiseAbs().maxCoeff());
  return d;
}

/// tau-regularized deviation gain of `pi` against the population playing `pi`:
///   g(t, j) = tau KL(pi(.|t,j) || softmax(q(t,j,.)/tau)) + delta E_pi[g(t+1, j')]
/// with q from bellman_backward, reported as sum_j P0(j) g(0, j). Zero exactly
/// when pi is the SoftMax of its own action values; tends to the greedy
/// exploitability as tau -> 0.
template <typename Scalar>
Scalar exploitability(const PolicyTable<Scalar>& pi, const std::vector<StateDistribution<Scalar>>& flow,
                      const MfgParams<Scalar>& params) {
  using std::exp;
  using std::log;
  const int N = params.N;
  const ActionValueTable<Scalar> values = bellman_backward(flow, pi, params);
  BinomialPmf<Scalar> peers(N - 1);
  Vector<Scalar> gap_next = Vector<Scalar>::Zero(N + 1);
  for (int t = params.horizon - 1; t >= 0; --t) {
    Vector<Scalar> gap(N + 1);
    const auto& pt = pi.slice(t);
    for (int j = 0; j <= N; ++j) {
      // log softmax(q / tau), shifted by the max so tiny tau cannot underflow.
      const auto q = values.q[t].row(j);
      const Scalar top = q.maxCoeff();
      const Scalar lse = log(exp((q(0) - top) / params.tau) + exp((q(1) - top) / params.tau));
      Scalar kl(0);
      for (int a = 0; a < 2; ++a) {
        const Scalar p = pt(j, a);
        if (p > Scalar(0)) kl += p * (log(p) - ((q(a) - top) / params.tau - lse));
      }
      const auto& pmf = peers(pt(j, kMove));
      const Scalar cont = pt(j, kWait) * pmf.dot(gap_next.segment(0, N)) +
                          pt(j, kMove) * pmf.dot(gap_next.segment(1, N));
      gap(j) = params.tau * kl + params.delta * cont;
    }
    gap_next = std::move(gap);
  }
  return params.initial_probs().dot(gap_next);
}

template <typename Scalar>
Scalar exploitability(const EquilibriumResult<Scalar>& result, const MfgParams<Scalar>& params) {
  return exploitability(result.policy, result.distribution_flow, params);
}

/// sum_j P0(j) (v_greedy(0, j) - v_pi(0, j)).
template <typename Scalar>
Scalar greedy_gap(const PolicyTable<Scalar>& pi, const std::vector<StateDistribution<Scalar>>& flow,
                  const MfgParams<Scalar>& params) {
  const auto best = bellman_backward(flow, pi, params);
  const auto own = policy_evaluation(pi, params);
  return params.initial_probs().dot(best.v[0] - own.v[0]);
}

/// Damped fixed point: forward flow under pi, backward values against that
/// flow, SoftMax, then pi <- (1 - damping) pi + damping pi_new. Stops when both
/// max-norm residuals fall below tol. Non-convergence is reported in the
/// result, not thrown.
template <typename Scalar>
EquilibriumResult<Scalar> solve_equilibrium(const MfgParams<Scalar>& params, const SolverOptions& options = {}) {
  params.validate();
  options.validate();
  const Scalar lambda(options.damping);

  EquilibriumResult<Scalar> result;
  PolicyTable<Scalar> pi = PolicyTable<Scalar>::uniform(params.horizon, params.N);
  auto flow = forward_flow(pi, params);

  for (int it = 1; it <= options.max_iter; ++it) {
    const auto values = bellman_backward(flow, pi, params);
    const PolicyTable<Scalar> response = softmax_table(values, params.tau);

    std::vector<ActionMatrix<Scalar>> damped;
    damped.reserve(params.horizon);
    for (int t = 0; t < params.horizon; ++t)
      damped.push_back((Scalar(1) - lambda) * pi.slice(t) + lambda * response.slice(t));
    PolicyTable<Scalar> next_pi(std::move(damped));
    auto next_flow = forward_flow(next_pi, params);

    const Residual r{static_cast<double>(next_pi.distance(pi)),
                     static_cast<double>(distribution_distance(next_flow, flow))};
    if (!std::isfinite(r.policy) || !std::isfinite(r.distribution))
      throw NumericalIntegrityError("solve_equilibrium: non-finite residual");
    if (it > kMonotoneWarmup && !result.residual_history.empty()) {
      const Residual& prev = result.residual_history.back();
      constexpr double slack = 1e-15;
      if (r.policy > prev.policy + slack || r.distribution > prev.distribution + slack)
        result.monotone = false;
    }
    result.residual_history.push_back(r);
    pi = std::move(next_pi);
    flow = std::move(next_flow);
    result.iterations = it;
    if (r.policy < options.tol && r.distribution < options.tol) {
      result.converged = true;
      break;
    }
  }
  result.converged = result.converged && result.monotone;

  pi.validate();
  result.values = bellman_backward(flow, pi, params);
  result.policy = std::move(pi);
  result.distribution_flow = std::move(flow);
  result.exploitability = exploitability(result, params);
  result.greedy_gap = greedy_gap(result.policy, result.distribution_flow, params);
  return result;
}

}  // namespace coopdyn::mfg
