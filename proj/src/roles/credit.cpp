#include "coopdyn/roles/credit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coopdyn::roles {

std::vector<double> delayed_credit(std::span<const RoleAssignment> episode, int n_agents, Role selected_role,
                                   double group_outcome, const CreditRule& rule) {
  if (episode.empty()) throw std::invalid_argument("delayed_credit: empty episode");
  if (n_agents < 1) throw std::invalid_argument("delayed_credit: need at least one agent");

  std::vector<int> shares(n_agents, 0);
  for (const auto& a : episode) {
    for (int id = 0; id < n_agents; ++id) {
      const bool in_selected = a.contains(id);
      const Role role = in_selected ? selected_role : other(selected_role);
      if (role == Role::Sacrifice) ++shares[id];
    }
  }
  const int total = std::accumulate(shares.begin(), shares.end(), 0);
  std::vector<double> credit(n_agents, 0.0);
  if (total == 0) return credit;
  const double per_share =
      (rule.share == ShareRule::EqualSplit ? group_outcome / total : group_outcome) + rule.completion_bonus;
  for (int id = 0; id < n_agents; ++id) credit[id] = per_share * shares[id];
  return credit;
}

std::vector<double> delayed_credit(RotationLedger& ledger, double group_outcome, const CreditRule& rule) {
  auto credit = delayed_credit(ledger.history(), ledger.size(), ledger.selected_role(), group_outcome, rule);
  for (int id = 0; id < ledger.size(); ++id) ledger.credit(id, credit[id]);
  return credit;
}

FairnessStats fairness_report(const RotationLedger& ledger) {
  if (ledger.rounds() < 1) throw std::invalid_argument("fairness_report: no completed rounds");
  FairnessStats s;
  s.rounds = ledger.rounds();
  std::vector<double> credits;
  for (const auto& rec : ledger.agents()) {
    s.max_reward_counts.push_back(rec.max_reward_count);
    s.sacrifice_counts.push_back(rec.sacrifice_count);
    credits.push_back(rec.credited_reward);
  }
  const auto [lo, hi] = std::minmax_element(s.max_reward_counts.begin(), s.max_reward_counts.end());
  s.max_reward_gap = *hi - *lo;
  const double mean = std::accumulate(credits.begin(), credits.end(), 0.0) / credits.size();
  double var = 0.0;
  for (double c : credits) var += (c - mean) * (c - mean);
  s.credit_stddev = std::sqrt(var / credits.size());
  const auto [clo, chi] = std::minmax_element(credits.begin(), credits.end());
  s.credit_range = *chi - *clo;
  return s;
}

}  // namespace coopdyn::roles
