#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "coopdyn/errors.hpp"
#include "coopdyn/mfg.hpp"
#include "coopdyn/random.hpp"

using namespace coopdyn;
using namespace coopdyn::mfg;

namespace {

/// Law of a + (number of moving peers) by enumerating all 2^(N-1) peer
/// action tuples.
std::vector<double> enumerate_transition(int a, double p, int N) {
  std::vector<double> out(N + 1, 0.0);
  const int peers = N - 1;
  for (unsigned mask = 0; mask < (1u << peers); ++mask) {
    double prob = 1.0;
    int movers = 0;
    for (int k = 0; k < peers; ++k) {
      const bool moves = (mask >> k) & 1u;
      prob *= moves ? p : 1.0 - p;
      movers += moves;
    }
    out[a + movers] += prob;
  }
  return out;
}

MfgParams<double> small_params(int N, int i, int horizon) {
  MfgParams<double> p;
  p.N = N;
  p.i = i;
  p.horizon = horizon;
  return p;
}

PolicyTable<double> random_policy(std::mt19937_64& rng, int horizon, int N) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ActionMatrix<double>> slices;
  for (int t = 0; t < horizon; ++t) {
    ActionMatrix<double> s(N + 1, 2);
    for (int j = 0; j <= N; ++j) {
      const double m = u(rng);
      s(j, kMove) = m;
      s(j, kWait) = 1.0 - m;
    }
    slices.push_back(s);
  }
  return PolicyTable<double>(std::move(slices));
}

}  // namespace

TEST_CASE("per-agent reward") {
  MfgParams<double> p;
  p.reward_mode = RewardMode::Formula;
  for (double kappa : {0.1, 1.0, 7.5}) {
    p.kappa = kappa;
    p.B = 0.3;
    CHECK(per_agent_reward(kMove, p.i, p) == doctest::Approx(0.8));
  }
  p.kappa = 1.0;
  p.B = 0.0;
  p.N = 20;
  p.i = 10;
  // Moving while the count sits far below the threshold is rewarded.
  CHECK(per_agent_reward(kMove, 0, p) == doctest::Approx(1.0 / (1.0 + std::exp(-10.0))).epsilon(1e-12));
  CHECK(per_agent_reward(kWait, 0, p) == doctest::Approx(4.5397868702434395e-05).epsilon(1e-12));
  for (int j = 0; j <= p.N; ++j)
    CHECK(per_agent_reward(kMove, j, p) + per_agent_reward(kWait, j, p) == doctest::Approx(1.0));

  MfgParams<double> table;
  CHECK(per_agent_reward(kWait, table.i + 1, table) == 0.2);
  CHECK(per_agent_reward(kMove, table.i + 1, table) == 0.0);
  CHECK(per_agent_reward(kMove, table.i, table) == 1.0);
  CHECK(per_agent_reward(kWait, 0, table) == 0.6);
}

TEST_CASE("group reward") {
  MfgParams<double> p;
  p.reward_mode = RewardMode::Formula;
  CHECK(group_reward(StateDistribution<double>::point_mass(p.N, p.i), kMove, p) == doctest::Approx(0.5));

  // Step-function tally for a sharp logistic.
  p.N = 10;
  p.kappa = 1e-3;
  for (int i : {3, 5, 8}) {
    p.i = i;
    const double expected = (i + 0.5) / 11.0;
    CHECK(group_reward(StateDistribution<double>::uniform(10), kMove, p) == doctest::Approx(expected).epsilon(1e-12));
  }

  p.kappa = 1e12;
  p.B = 7.0;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 50; ++n) {
    Vector<double> w(11);
    for (int j = 0; j < 11; ++j) w(j) = u(rng);
    w /= w.sum();
    CHECK(group_reward(w, kMove, p) == doctest::Approx(7.5));
  }

  Vector<double> bad = Vector<double>::Constant(11, 0.1);
  CHECK_THROWS_AS(group_reward(bad, kMove, p), ValidationError);
  CHECK_THROWS_AS(StateDistribution<double>::from_probs(bad), ValidationError);
}

TEST_CASE("utility adds the consistency penalty and base reward") {
  MfgParams<double> p;
  p.alpha = 3.0;
  CHECK(utility(kMove, p.i, p) == 1.0);
  p.alpha = 0.1;
  CHECK(utility(kWait, p.i + 4, p) == doctest::Approx(-0.2));
  p.alpha = 0.0;
  for (int j = 0; j <= p.N; ++j)
    for (int a : {kWait, kMove}) CHECK(utility(a, j, p) == per_agent_reward(a, j, p));
  p.b_base = 2.5;
  CHECK(utility(kWait, 0, p) == doctest::Approx(3.1));
}

TEST_CASE("transition distribution examples") {
  const auto d = transition_distribution(0, kMove, 0.5, 3);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == doctest::Approx(0.25));
  CHECK(d[2] == doctest::Approx(0.5));
  CHECK(d[3] == doctest::Approx(0.25));

  const auto still = transition_distribution(4, kWait, 0.0, 6);
  CHECK(still[0] == 1.0);
  CHECK(still.probs().sum() == 1.0);

  const auto ref = enumerate_transition(kWait, 0.3, 5);
  const auto got = transition_distribution(2, kWait, 0.3, 5);
  for (int j = 0; j <= 5; ++j) CHECK(std::abs(got[j] - ref[j]) < 1e-12);
}

TEST_CASE("transition distribution matches enumeration for N up to 12") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int N = 2; N <= 12; ++N) {
    for (int n = 0; n < 6; ++n) {
      const double p = n == 0 ? 0.0 : n == 1 ? 1.0 : u(rng);
      for (int a : {kWait, kMove}) {
        const auto ref = enumerate_transition(a, p, N);
        const auto got = transition_distribution(static_cast<int>(rng() % (N + 1)), a, p, N);
        double mass = 0.0;
        for (int j = 0; j <= N; ++j) {
          CHECK(std::abs(got[j] - ref[j]) < 1e-12);
          CHECK(got[j] >= 0.0);
          mass += got[j];
        }
        CHECK(std::abs(mass - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("transition distribution stays normalized at large N") {
  for (int N : {100, 1000, 5000})
    for (double p : {1e-9, 0.01, 0.5, 0.999999}) {
      const auto d = transition_distribution(0, kMove, p, N);
      CHECK(std::abs(d.probs().sum() - 1.0) < 1e-12);
      CHECK(d.mean() == doctest::Approx(1.0 + (N - 1) * p).epsilon(1e-9));
    }
  CHECK_THROWS_AS(transition_distribution(0, 2, 0.5, 4), std::invalid_argument);
  CHECK_THROWS_AS(transition_distribution(5, 0, 0.5, 4), std::invalid_argument);
  CHECK_THROWS_AS(transition_distribution(0, 0, 1.5, 4), NumericalIntegrityError);
}

TEST_CASE("evolve distribution") {
  auto p = small_params(6, 3, 1);
  const auto P = StateDistribution<double>::uniform(6);
  CHECK(evolve_distribution(P, PolicyTable<double>::constant(1, 6, 0.0).slice(0), p)[0] == 1.0);
  CHECK(evolve_distribution(P, PolicyTable<double>::constant(1, 6, 1.0).slice(0), p)[6] == 1.0);

  // N = 4: every agent independently moves with probability 1/2, so the next
  // count is Binomial(4, 1/2) whatever the current count.
  p = small_params(4, 2, 1);
  const auto next = evolve_distribution(StateDistribution<double>::uniform(4),
                                        PolicyTable<double>::constant(1, 4, 0.5).slice(0), p);
  std::vector<double> tally(5, 0.0);
  for (int j = 0; j <= 4; ++j) {
    for (unsigned mask = 0; mask < 16; ++mask) tally[__builtin_popcount(mask)] += (1.0 / 5.0) / 16.0;
  }
  for (int j = 0; j <= 4; ++j) CHECK(std::abs(next[j] - tally[j]) < 1e-12);
}

TEST_CASE("evolve distribution matches per-state enumeration") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int N = 2; N <= 9; ++N) {
    auto p = small_params(N, 1, 1);
    Vector<double> w(N + 1);
    for (int j = 0; j <= N; ++j) w(j) = u(rng);
    w /= w.sum();
    const auto P = StateDistribution<double>::from_probs(w);
    const auto pi = random_policy(rng, 1, N);
    const auto got = evolve_distribution(P, pi.slice(0), p);
    std::vector<double> ref(N + 1, 0.0);
    for (int jp = 0; jp <= N; ++jp) {
      const double m = pi.move_prob(0, jp);
      // All N agents (the representative included) draw independently.
      for (unsigned mask = 0; mask < (1u << N); ++mask) {
        double prob = P[jp];
        for (int k = 0; k < N; ++k) prob *= ((mask >> k) & 1u) ? m : 1.0 - m;
        ref[__builtin_popcount(mask)] += prob;
      }
    }
    for (int j = 0; j <= N; ++j) CHECK(std::abs(got[j] - ref[j]) < 1e-12);
  }
}

TEST_CASE("forward flow stays normalized") {
  std::mt19937_64 rng(6);
  for (int n = 0; n < 30; ++n) {
    const int N = 2 + static_cast<int>(rng() % 40);
    auto p = small_params(N, 1 + static_cast<int>(rng() % (N - 1)), 1 + static_cast<int>(rng() % 25));
    const auto flow = forward_flow(random_policy(rng, p.horizon, N), p);
    CHECK(flow.size() == static_cast<std::size_t>(p.horizon + 1));
    for (const auto& P : flow) {
      CHECK(std::abs(P.probs().sum() - 1.0) < 1e-12);
      CHECK((P.probs().array() >= 0).all());
    }
  }
}

TEST_CASE("softmax policy") {
  using Row = Eigen::Matrix<double, 1, 2>;
  for (double c : {-1e6, 0.0, 3.7, 1e8}) {
    const Row s = softmax_policy<double>(Row(c, c), 0.3);
    CHECK(s(0) == 0.5);
    CHECK(s(1) == 0.5);
  }
  const Row s = softmax_policy<double>(Row(0.0, std::log(3.0)), 1.0);
  CHECK(s(0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(s(1) == doctest::Approx(0.75).epsilon(1e-14));
  const Row big = softmax_policy<double>(Row(0.0, 1000.0), 1.0);
  CHECK(std::isfinite(big(0)));
  CHECK(big(0) < 1e-300);
  CHECK(big(1) == 1.0);
  CHECK_THROWS_AS(softmax_policy<double>(Row(std::nan(""), 0.0), 1.0), NumericalIntegrityError);
  CHECK_THROWS_AS(softmax_policy<double>(Row(INFINITY, 0.0), 1.0), NumericalIntegrityError);
}

TEST_CASE("softmax rows are distributions for any finite q") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> q(-500.0, 500.0), tau(1e-3, 50.0);
  for (int n = 0; n < 5000; ++n) {
    const Eigen::Matrix<double, 1, 2> s = softmax_policy<double>({q(rng), q(rng)}, tau(rng));
    CHECK((s.array() >= 0).all());
    CHECK(std::abs(s.sum() - 1.0) < 1e-12);
  }
}

TEST_CASE("greedy action breaks ties toward waiting") {
  CHECK(greedy_action(1.0, 1.0) == kWait);
  CHECK(greedy_action(1.0, 1.5) == kMove);
  CHECK(greedy_action(2.0, 1.5) == kWait);
}

TEST_CASE("bellman backward: one step and myopic collapse") {
  std::mt19937_64 rng(10);
  auto p = small_params(7, 3, 1);
  p.alpha = 0.05;
  auto pi = random_policy(rng, 1, 7);
  auto values = bellman_backward(forward_flow(pi, p), pi, p);
  const auto U = utility_matrix(p);
  CHECK(values.q[0] == U);
  CHECK(values.q[1].isZero());

  p.horizon = 6;
  p.delta = 0.0;
  pi = random_policy(rng, 6, 7);
  values = bellman_backward(forward_flow(pi, p), pi, p);
  for (int t = 0; t < 6; ++t) CHECK(values.q[t] == U);

  p.delta = 0.9;
  CHECK_THROWS_AS(bellman_backward(forward_flow(pi, p), PolicyTable<double>::uniform(5, 7), p), std::invalid_argument);
}

TEST_CASE("bellman backward matches a hand-expanded two-step sum") {
  // N = 3 leaves two peers: four outcomes (ww, wm, mw, mm).
  MfgParams<double> p = small_params(3, 1, 2);
  p.delta = 0.8;
  p.reward_table = {0.9, 0.5, 0.3, 0.1};
  std::vector<ActionMatrix<double>> slices(2, ActionMatrix<double>(4, 2));
  const double m0[4] = {0.2, 0.7, 0.4, 0.9};
  const double m1[4] = {0.6, 0.1, 0.5, 0.3};
  for (int j = 0; j < 4; ++j) {
    slices[0](j, kMove) = m0[j];
    slices[0](j, kWait) = 1 - m0[j];
    slices[1](j, kMove) = m1[j];
    slices[1](j, kWait) = 1 - m1[j];
  }
  const PolicyTable<double> pi(slices);
  const auto values = bellman_backward(forward_flow(pi, p), pi, p);

  const auto U = [&](int a, int j) {
    const auto& r = p.reward_table;
    if (j <= p.i) return a ? r.move_uncongested : r.wait_uncongested;
    return a ? r.move_congested : r.wait_congested;
  };
  double v1[4];
  for (int j = 0; j < 4; ++j) v1[j] = std::max(U(0, j), U(1, j));
  for (int j = 0; j < 4; ++j) {
    const double m = m0[j];
    for (int a : {0, 1}) {
      const double expected = U(a, j) + 0.8 * ((1 - m) * (1 - m) * v1[a] + (1 - m) * m * v1[a + 1] +
                                                m * (1 - m) * v1[a + 1] + m * m * v1[a + 2]);
      CHECK(std::abs(values.q[0](j, a) - expected) < 1e-14);
    }
    for (int a : {0, 1}) CHECK(values.q[1](j, a) == U(a, j));
  }
}

TEST_CASE("policy evaluation of a deterministic greedy policy equals the greedy values") {
  // With delta = 0 the threshold policy is greedy with respect to its own q.
  auto p = small_params(10, 4, 5);
  p.delta = 0.0;
  std::vector<ActionMatrix<double>> slices(5, ActionMatrix<double>::Zero(11, 2));
  for (auto& s : slices)
    for (int j = 0; j <= 10; ++j) s(j, j <= 4 ? kMove : kWait) = 1.0;
  const PolicyTable<double> pi(slices);
  const auto flow = forward_flow(pi, p);
  CHECK(greedy_gap(pi, flow, p) == 0.0);
  p.tau = 1e-3;
  CHECK(exploitability(pi, flow, p) < 1e-12);
}

TEST_CASE("regularized exploitability is nonnegative and tends to the greedy gap as tau shrinks") {
  std::mt19937_64 rng(14);
  for (int n = 0; n < 40; ++n) {
    const int N = 2 + static_cast<int>(rng() % 12);
    auto p = small_params(N, 1 + static_cast<int>(rng() % (N - 1)), 1 + static_cast<int>(rng() % 8));
    p.delta = 0.5 + 0.4 * unit_uniform(rng);
    const auto pi = random_policy(rng, p.horizon, N);
    const auto flow = forward_flow(pi, p);
    const double gap = greedy_gap(pi, flow, p);
    CHECK(gap >= -1e-12);
    for (double tau : {1.0, 0.1}) {
      p.tau = tau;
      CHECK(exploitability(pi, flow, p) >= -1e-12);
    }
    // tau log 2 per step bounds the entropy slack.
    p.tau = 1e-7;
    CHECK(std::abs(exploitability(pi, flow, p) - gap) < p.tau * std::log(2.0) * p.horizon + 1e-10);
  }
}

TEST_CASE("exploitability of uniform play against separated rewards is positive") {
  auto p = small_params(6, 3, 4);
  p.reward_table = {10.0, 0.0, 0.0, -10.0};
  p.tau = 0.1;
  const auto pi = PolicyTable<double>::uniform(4, 6);
  const auto flow = forward_flow(pi, p);
  CHECK(exploitability(pi, flow, p) > 1.0);
  CHECK(greedy_gap(pi, flow, p) > 1.0);
}
