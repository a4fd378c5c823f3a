#pragma once

#include <span>
#include <vector>

#include "coopdyn/roles/ledger.hpp"

namespace coopdyn::roles {

enum class ShareRule {
  EqualSplit,  // each share receives outcome / shares; credits sum to outcome
  FullEach,    // each share receives the whole outcome
};

struct CreditRule {
  ShareRule share = ShareRule::EqualSplit;
  // Extra credit per share for completing the episode.
  double completion_bonus = 0.0;
};

/// Episode-end credit for agents in the sacrifice role. One share per
/// (round, agent) spent in that role; agents in the max-reward role get no
/// delayed credit.
std::vector<double> delayed_credit(std::span<const RoleAssignment> episode, int n_agents, Role selected_role,
                                   double group_outcome, const CreditRule& rule = {});

/// Computes credit for the ledger's full history and records it.
std::vector<double> delayed_credit(RotationLedger& ledger, double group_outcome, const CreditRule& rule = {});

struct FairnessStats {
  std::vector<int> max_reward_counts;
  std::vector<int> sacrifice_counts;
  int max_reward_gap = 0;  // max - min of max_reward_counts
  double credit_stddev = 0.0;
  double credit_range = 0.0;
  int rounds = 0;
};

FairnessStats fairness_report(const RotationLedger& ledger);

}  // namespace coopdyn::roles
