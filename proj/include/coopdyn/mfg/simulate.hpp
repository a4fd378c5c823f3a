#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "coopdyn/mfg/dynamics.hpp"
#include "coopdyn/random.hpp"

namespace coopdyn::mfg {

template <typename Scalar = double>
struct EmpiricalStats {
  // Row t: empirical frequency of each count j over episodes (t = 0..H).
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> distribution;
  Vector<Scalar> mean_count;            // empirical E[j] per t
  Vector<Scalar> mean_field_count;      // E_P[j] per t from the flow
  Vector<Scalar> agent_reward;          // mean utility per agent per episode
  Scalar deviation{};                   // sup_t |E^[j]/N - E_P[j]/N|
  int episodes = 0;
};

/// Finite-N Monte Carlo of the intersection chain: N agents each draw their
/// action from pi(. | j, t) given the realized previous count j; every agent
/// earns U(a, j). Episode e uses generator stream e of `seed`.
template <typename Scalar>
EmpiricalStats<Scalar> simulate_population(const MfgParams<Scalar>& params, const PolicyTable<Scalar>& pi,
                                           int episodes, std::uint64_t seed) {
  params.validate();
  if (episodes < 1) throw std::invalid_argument("simulate_population: episodes must be >= 1");
  if (pi.horizon() != params.horizon || pi.N() != params.N)
    throw std::invalid_argument("simulate_population: policy shape does not match params");
  const int N = params.N;
  const int H = params.horizon;
  const ActionMatrix<Scalar> U = utility_matrix(params);
  const Vector<Scalar> p0 = params.initial_probs();

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> counts =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(H + 1, N + 1);
  Vector<Scalar> reward = Vector<Scalar>::Zero(N);

  for (int e = 0; e < episodes; ++e) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(e));
    // Inverse-CDF draw of the initial count.
    const double u0 = unit_uniform(rng);
    int j = N;
    double cdf = 0.0;
    for (int k = 0; k <= N; ++k) {
      cdf += static_cast<double>(p0(k));
      if (u0 < cdf) {
        j = k;
        break;
      }
    }
    counts(0, j) += 1;
    for (int t = 0; t < H; ++t) {
      const double p_move = static_cast<double>(pi.move_prob(t, j));
      int movers = 0;
      for (int agent = 0; agent < N; ++agent) {
        const int a = unit_uniform(rng) < p_move ? kMove : kWait;
        movers += a;
        reward(agent) += U(j, a);
      }
      j = movers;
      counts(t + 1, j) += 1;
    }
  }

  EmpiricalStats<Scalar> out;
  out.episodes = episodes;
  out.distribution = counts / Scalar(episodes);
  const Vector<Scalar> js = Vector<Scalar>::LinSpaced(N + 1, Scalar(0), Scalar(N));
  out.mean_count = out.distribution * js;
  const auto flow = forward_flow(pi, params);
  out.mean_field_count.resize(H + 1);
  for (int t = 0; t <= H; ++t) out.mean_field_count(t) = flow[t].mean();
  out.agent_reward = reward / Scalar(episodes);
  out.deviation = ((out.mean_count - out.mean_field_count).cwiseAbs() / Scalar(N)).maxCoeff();
  return out;
}

}  // namespace coopdyn::mfg
