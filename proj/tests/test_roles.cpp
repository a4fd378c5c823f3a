#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"

#include "coopdyn/errors.hpp"
#include "coopdyn/random.hpp"
#include "coopdyn/roles/assign.hpp"
#include "coopdyn/roles/credit.hpp"
#include "coopdyn/roles/ledger.hpp"

using namespace coopdyn;
using namespace coopdyn::roles;

namespace {

std::vector<int> sacrifice_tally(const RotationLedger& ledger) {
  std::vector<int> out(ledger.size(), 0);
  for (const auto& a : ledger.history())
    for (int id : a.selected) ++out[id];
  return out;
}

}  // namespace

TEST_CASE("three agents take turns sacrificing") {
  RotationLedger ledger(3, Role::Sacrifice);
  CHECK(deterministic_assign(ledger, 1).selected == std::vector<int>{0});
  CHECK(deterministic_assign(ledger, 1).selected == std::vector<int>{1});
  CHECK(deterministic_assign(ledger, 1).selected == std::vector<int>{2});
  for (const auto& rec : ledger.agents()) CHECK(rec.sacrifice_count == 1);
  CHECK(deterministic_assign(ledger, 1).selected == std::vector<int>{0});
}

TEST_CASE("recent sacrificers are skipped while another agent is eligible") {
  RotationLedger ledger(3, Role::Sacrifice, 2);
  std::vector<int> seq;
  for (int r = 0; r < 30; ++r) {
    const auto& a = deterministic_assign(ledger, 1);
    const int chosen = a.selected.front();
    // Agents that served in either of the two previous rounds.
    const std::size_t n = seq.size();
    const bool recent = (n >= 1 && seq[n - 1] == chosen) || (n >= 2 && seq[n - 2] == chosen);
    CHECK_FALSE(recent);
    seq.push_back(chosen);
  }
}

TEST_CASE("rotation sizes and tallies") {
  RotationLedger five(5, Role::Sacrifice);
  for (int r = 0; r < 10; ++r) CHECK(deterministic_assign(five, 2).selected.size() == 2);
  CHECK(sacrifice_tally(five) == std::vector<int>(5, 4));

  RotationLedger six(6, Role::MaxReward);
  for (int r = 0; r < 9; ++r) deterministic_assign(six, 2);
  for (const auto& rec : six.agents()) CHECK(rec.max_reward_count == 3);

  RotationLedger three(3, Role::Sacrifice);
  CHECK_THROWS_AS(deterministic_assign(three, 0), std::invalid_argument);
  CHECK_THROWS_AS(deterministic_assign(three, 3), std::invalid_argument);
}

TEST_CASE("every N consecutive rounds after warm-up hold each agent once") {
  for (int N = 2; N <= 12; ++N) {
    RotationLedger ledger(N, Role::Sacrifice);
    std::vector<int> seq;
    for (int r = 0; r < 6 * N; ++r) seq.push_back(deterministic_assign(ledger, 1).selected.front());
    for (std::size_t start = N; start + N <= seq.size(); ++start) {
      std::vector<int> window(seq.begin() + start, seq.begin() + start + N);
      std::sort(window.begin(), window.end());
      std::vector<int> ids(N);
      std::iota(ids.begin(), ids.end(), 0);
      CHECK(window == ids);
    }
  }
}

TEST_CASE("ledger records match tallies recomputed from history") {
  std::mt19937_64 rng(17);
  for (int n = 0; n < 100; ++n) {
    const int N = 2 + static_cast<int>(rng() % 9);
    const int W = 1 + static_cast<int>(rng() % N);
    RotationLedger ledger(N, rng() % 2 ? Role::Sacrifice : Role::MaxReward, W);
    const int rounds = 1 + static_cast<int>(rng() % 40);
    for (int r = 0; r < rounds; ++r) {
      std::vector<int> pick;
      for (int id = 0; id < N; ++id)
        if (rng() % 3 == 0) pick.push_back(id);
      if (rng() % 2) {
        ledger.record(pick);
      } else {
        deterministic_assign(ledger, 1 + static_cast<int>(rng() % (N - 1)));
      }
    }
    for (const auto& rec : ledger.agents()) {
      int sac = 0, max = 0, streak = 0, last = 0;
      std::optional<Role> prev;
      for (const auto& a : ledger.history()) {
        const Role role = ledger.role_in(a, rec.id);
        (role == Role::Sacrifice ? sac : max) += 1;
        streak = (prev && *prev == role) ? streak + 1 : 0;
        prev = role;
        if (a.contains(rec.id)) last = a.round;
      }
      CHECK(rec.sacrifice_count == sac);
      CHECK(rec.max_reward_count == max);
      CHECK(rec.streak == streak);
      CHECK(rec.last_selected_round == last);
      CHECK(static_cast<int>(rec.window.size()) <= W);
    }
  }
}

TEST_CASE("ledger rejects bad assignments") {
  RotationLedger ledger(3, Role::Sacrifice);
  CHECK_THROWS_AS(ledger.record({1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(ledger.record({3}), std::invalid_argument);
  CHECK_THROWS_AS(RotationLedger(0, Role::Sacrifice), std::invalid_argument);
}

TEST_CASE("sigmoid switch probability") {
  SwitchPolicy p;
  p.s0 = 4;
  p.tau_s = 0.7;
  CHECK(sigmoid_switch_probability(4, p) == 0.5);
  p.s0 = 50;
  p.tau_s = 0.1;
  CHECK(sigmoid_switch_probability(0, p) < 1e-200);
  CHECK(binomial_coefficient(3, 2) == 3.0);
  CHECK(SwitchPolicy::for_population(4, 2).s0 == 3.0);
  CHECK(SwitchPolicy::for_population(20, 8).s0 == 75582.0);
  CHECK(binomial_coefficient(5, 7) == 0.0);

  SwitchPolicy det;
  det.mode = SwitchMode::DeterministicWindow;
  CHECK_THROWS_AS(sigmoid_switch_probability(1, det), std::invalid_argument);
  CHECK_THROWS_AS(sigmoid_switch_probability(-1, p), std::invalid_argument);

  SwitchPolicy bad;
  bad.s0 = 0.5;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = SwitchPolicy{};
  bad.tau_s = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = SwitchPolicy{};
  bad.window = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("sigmoid is strictly increasing in the streak") {
  std::mt19937_64 rng(23);
  for (int n = 0; n < 500; ++n) {
    SwitchPolicy p;
    p.s0 = 1 + static_cast<double>(rng() % 30);
    p.tau_s = 0.2 + 5.0 * unit_uniform(rng);
    double prev = -1.0;
    for (int s = 0; s <= 2 * static_cast<int>(p.s0); ++s) {
      const double q = sigmoid_switch_probability(s, p);
      // Doubles saturate at 1 far past the midpoint.
      if (q < 1.0) CHECK(q > prev);
      CHECK(q >= prev);
      CHECK(q >= 0.0);
      CHECK(q <= 1.0);
      prev = q;
    }
  }
}

TEST_CASE("stochastic switching frequencies") {
  const auto switch_rate = [](const SwitchPolicy& p, int streak, int trials) {
    int switched = 0;
    for (int t = 0; t < trials; ++t) {
      RotationLedger ledger(1, Role::Sacrifice);
      ledger.seed_state(0, Role::MaxReward, streak);
      Rng rng = make_rng(1234, static_cast<std::uint64_t>(t));
      switched += propose_stochastic(ledger, p, rng).size() == 1;
    }
    return static_cast<double>(switched) / trials;
  };
  const int trials = 10000;

  SwitchPolicy mid;
  mid.s0 = 5;
  mid.tau_s = 1.5;
  const double half = switch_rate(mid, 5, trials);
  CHECK(std::abs(half - 0.5) < 3.0 * std::sqrt(0.25 / trials));

  SwitchPolicy tail;
  tail.s0 = 3;
  tail.tau_s = 1.0;
  const double p0 = sigmoid_switch_probability(0, tail);
  const double rate = switch_rate(tail, 0, trials);
  CHECK(std::abs(rate - p0) < 3.0 * std::sqrt(p0 * (1 - p0) / trials));

  SwitchPolicy sharp;
  sharp.s0 = 3;
  sharp.tau_s = 1e-3;
  CHECK(switch_rate(sharp, 4, 1000) == 1.0);
  CHECK(switch_rate(sharp, 2, 1000) == 0.0);
}

TEST_CASE("stochastic assignment starts from the initial roles and is seeded") {
  auto p = SwitchPolicy::for_population(6, 2, 0.5);
  p.s0 = 2;
  const auto run = [&](std::uint64_t seed) {
    RotationLedger ledger(6, Role::MaxReward, p.window);
    Rng rng = make_rng(seed, 0);
    std::vector<std::vector<int>> out;
    for (int r = 0; r < 30; ++r) out.push_back(stochastic_assign(ledger, p, rng).selected);
    return out;
  };
  const auto a = run(5);
  CHECK(a.front() == std::vector<int>{0, 1});
  CHECK(run(5) == a);
  CHECK(run(6) != a);
}

TEST_CASE("delayed credit") {
  const std::vector<RoleAssignment> one{{1, {2}}};
  auto c = delayed_credit(one, 3, Role::Sacrifice, 10.0);
  CHECK(c == std::vector<double>{0.0, 0.0, 10.0});

  c = delayed_credit(one, 3, Role::Sacrifice, 0.0);
  CHECK(c == std::vector<double>{0.0, 0.0, 0.0});

  // Intersection: the selected role is moving, so the three others wait.
  const std::vector<RoleAssignment> movers{{1, {0}}};
  c = delayed_credit(movers, 4, Role::MaxReward, 9.0);
  CHECK(c == std::vector<double>{0.0, 3.0, 3.0, 3.0});

  c = delayed_credit(movers, 4, Role::MaxReward, 9.0, {ShareRule::FullEach, 0.5});
  CHECK(c == std::vector<double>{0.0, 9.5, 9.5, 9.5});

  CHECK_THROWS_AS(delayed_credit(std::vector<RoleAssignment>{}, 3, Role::Sacrifice, 1.0), std::invalid_argument);
}

TEST_CASE("equal-split credit conserves the group outcome") {
  std::mt19937_64 rng(31);
  for (int n = 0; n < 300; ++n) {
    const int N = 2 + static_cast<int>(rng() % 10);
    RotationLedger ledger(N, Role::Sacrifice);
    const int rounds = 1 + static_cast<int>(rng() % 20);
    for (int r = 0; r < rounds; ++r) deterministic_assign(ledger, 1 + static_cast<int>(rng() % (N - 1)));
    const double outcome = 100.0 * unit_uniform(rng);
    const auto c = delayed_credit(ledger, outcome);
    CHECK(std::accumulate(c.begin(), c.end(), 0.0) == doctest::Approx(outcome).epsilon(1e-12));
    for (int id = 0; id < N; ++id) {
      CHECK(ledger.agent(id).credited_reward == c[id]);
      CHECK(c[id] == doctest::Approx(outcome * ledger.agent(id).sacrifice_count /
                                     std::accumulate(ledger.agents().begin(), ledger.agents().end(), 0,
                                                     [](int s, const AgentRecord& r) { return s + r.sacrifice_count; })));
    }
    for (const auto& row : ledger.rows())
      if (row.round == ledger.rounds()) CHECK(row.credited_reward == c[row.agent_id]);
  }
}

TEST_CASE("fairness report") {
  for (int m : {1, 2, 5}) {
    RotationLedger ledger(4, Role::Sacrifice);
    for (int r = 0; r < 4 * m; ++r) deterministic_assign(ledger, 1);
    const auto s = fairness_report(ledger);
    CHECK(s.max_reward_gap == 0);
    CHECK(s.rounds == 4 * m);
    CHECK(s.sacrifice_counts == std::vector<int>(4, m));
  }
  RotationLedger one(3, Role::Sacrifice);
  deterministic_assign(one, 1);
  CHECK(fairness_report(one).max_reward_gap == 1);

  RotationLedger stochastic(5, Role::MaxReward);
  auto p = SwitchPolicy::for_population(5, 2);
  Rng rng = make_rng(2, 0);
  for (int r = 0; r < 200; ++r) stochastic_assign(stochastic, p, rng);
  const auto s = fairness_report(stochastic);
  CHECK(s.rounds == 200);
  CHECK(s.max_reward_gap >= 0);

  CHECK_THROWS_AS(fairness_report(RotationLedger(3, Role::Sacrifice)), std::invalid_argument);
}

TEST_CASE("static credit concentrates while rotation spreads it") {
  RotationLedger fixed(3, Role::Sacrifice), rotating(3, Role::Sacrifice);
  for (int r = 0; r < 6; ++r) {
    fixed.record({0});
    deterministic_assign(rotating, 1);
  }
  delayed_credit(fixed, 6.0);
  delayed_credit(rotating, 6.0);
  CHECK(fairness_report(fixed).credit_range == 6.0);
  CHECK(fairness_report(rotating).credit_range == 0.0);
}
