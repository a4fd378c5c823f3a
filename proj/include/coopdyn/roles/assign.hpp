#pragma once

#include <vector>

#include "coopdyn/random.hpp"
#include "coopdyn/roles/ledger.hpp"

namespace coopdyn::roles {

enum class SwitchMode { DeterministicWindow, StochasticSigmoid };

struct SwitchPolicy {
  SwitchMode mode = SwitchMode::StochasticSigmoid;
  int window = 1;
  double s0 = 1.0;
  double tau_s = 1.0;
  // Agents 0..initial_selected-1 hold the selected role when a stochastic run
  // starts from an empty ledger.
  int initial_selected = 1;

  /// Stochastic policy with midpoint C(N - 1, i) and window N - 1.
  static SwitchPolicy for_population(int N, int i, double tau_s = 1.0);

  void validate() const;
};

/// C(n, k) as a double.
double binomial_coefficient(int n, int k);

/// k agents for the selected role: agents that did not hold it within the
/// window, ordered by (times served, oldest last service, id). Falls back to
/// all agents under the same order when fewer than k are eligible.
std::vector<int> select_deterministic(const RotationLedger& ledger, int k);

/// select_deterministic, recorded into the ledger.
RoleAssignment deterministic_assign(RotationLedger& ledger, int k);

/// 1 / (1 + exp(-(streak - s0) / tau_s)).
double sigmoid_switch_probability(int streak, const SwitchPolicy& policy);

/// Each agent flips its current role independently with the sigmoid
/// probability of its streak; one uniform draw per agent in id order. On an
/// empty ledger the initial roles are returned unflipped.
std::vector<int> propose_stochastic(const RotationLedger& ledger, const SwitchPolicy& policy, Rng& rng);

/// propose_stochastic, recorded into the ledger.
RoleAssignment stochastic_assign(RotationLedger& ledger, const SwitchPolicy& policy, Rng& rng);

}  // namespace coopdyn::roles
