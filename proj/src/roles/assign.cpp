#include "coopdyn/roles/assign.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "coopdyn/errors.hpp"

namespace coopdyn::roles {

double binomial_coefficient(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int m = 1; m <= k; ++m) c = c * (n - k + m) / m;
  return std::round(c);
}

SwitchPolicy SwitchPolicy::for_population(int N, int i, double tau_s) {
  SwitchPolicy p;
  p.mode = SwitchMode::StochasticSigmoid;
  p.window = std::max(1, N - 1);
  p.s0 = binomial_coefficient(N - 1, i);
  p.tau_s = tau_s;
  p.initial_selected = i;
  return p;
}

void SwitchPolicy::validate() const {
  if (window < 1) throw ValidationError("switch policy: window must be >= 1");
  if (!(s0 >= 1.0)) throw ValidationError("switch policy: s0 must be >= 1");
  if (!(tau_s > 0.0)) throw ValidationError("switch policy: tau_s must be > 0");
  if (initial_selected < 0) throw ValidationError("switch policy: initial_selected must be >= 0");
}

std::vector<int> select_deterministic(const RotationLedger& ledger, int k) {
  const int n = ledger.size();
  if (k < 1 || k >= n) throw std::invalid_argument("deterministic_assign: k must satisfy 1 <= k < agents");

  const bool serving_is_sacrifice = ledger.selected_role() == Role::Sacrifice;
  const auto key = [&](int id) {
    const auto& rec = ledger.agent(id);
    const int served = serving_is_sacrifice ? rec.sacrifice_count : rec.max_reward_count;
    return std::tuple(served, rec.last_selected_round, id);
  };
  const auto by_key = [&](int a, int b) { return key(a) < key(b); };

  std::vector<int> eligible;
  for (int id = 0; id < n; ++id)
    if (!ledger.served_in_window(id)) eligible.push_back(id);
  if (static_cast<int>(eligible.size()) < k) {
    eligible.resize(n);
    for (int id = 0; id < n; ++id) eligible[id] = id;
  }
  std::partial_sort(eligible.begin(), eligible.begin() + k, eligible.end(), by_key);
  eligible.resize(k);
  std::sort(eligible.begin(), eligible.end());
  return eligible;
}

RoleAssignment deterministic_assign(RotationLedger& ledger, int k) {
  return ledger.record(select_deterministic(ledger, k));
}

double sigmoid_switch_probability(int streak, const SwitchPolicy& policy) {
  if (policy.mode != SwitchMode::StochasticSigmoid)
    throw std::invalid_argument("sigmoid_switch_probability: policy is not stochastic");
  if (streak < 0) throw std::invalid_argument("sigmoid_switch_probability: streak must be >= 0");
  return 1.0 / (1.0 + std::exp(-(static_cast<double>(streak) - policy.s0) / policy.tau_s));
}

std::vector<int> propose_stochastic(const RotationLedger& ledger, const SwitchPolicy& policy, Rng& rng) {
  policy.validate();
  if (policy.mode != SwitchMode::StochasticSigmoid)
    throw std::invalid_argument("stochastic_assign: policy is not stochastic");
  std::vector<int> selected;
  if (ledger.rounds() == 0 && std::none_of(ledger.agents().begin(), ledger.agents().end(),
                                           [](const AgentRecord& r) { return r.role.has_value(); })) {
    for (int id = 0; id < std::min(policy.initial_selected, ledger.size()); ++id) selected.push_back(id);
    return selected;
  }
  for (const auto& rec : ledger.agents()) {
    const Role current = rec.role.value_or(other(ledger.selected_role()));
    const bool flip = unit_uniform(rng) < sigmoid_switch_probability(rec.streak, policy);
    const Role next = flip ? other(current) : current;
    if (next == ledger.selected_role()) selected.push_back(rec.id);
  }
  return selected;
}

RoleAssignment stochastic_assign(RotationLedger& ledger, const SwitchPolicy& policy, Rng& rng) {
  return ledger.record(propose_stochastic(ledger, policy, rng));
}

}  // namespace coopdyn::roles
