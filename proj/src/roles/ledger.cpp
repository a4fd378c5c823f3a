#include "coopdyn/roles/ledger.hpp"

#include <algorithm>
#include <stdexcept>

namespace coopdyn::roles {

std::string_view to_string(Role r) { return r == Role::MaxReward ? "max_reward" : "sacrifice"; }

bool RoleAssignment::contains(int id) const {
  return std::binary_search(selected.begin(), selected.end(), id);
}

RotationLedger::RotationLedger(int n_agents, Role selected_role, int window)
    : window_(window > 0 ? window : std::max(1, n_agents - 1)), selected_role_(selected_role) {
  if (n_agents < 1) throw std::invalid_argument("ledger: need at least one agent");
  if (window < 0) throw std::invalid_argument("ledger: window must be >= 1");
  agents_.resize(n_agents);
  for (int id = 0; id < n_agents; ++id) agents_[id].id = id;
}

bool RotationLedger::served_in_window(int id) const {
  const auto& w = agents_.at(id).window;
  return std::find(w.begin(), w.end(), true) != w.end();
}

const RoleAssignment& RotationLedger::record(std::vector<int> selected) {
  std::sort(selected.begin(), selected.end());
  if (std::adjacent_find(selected.begin(), selected.end()) != selected.end())
    throw std::invalid_argument("ledger: duplicate agent id in assignment");
  if (!selected.empty() && (selected.front() < 0 || selected.back() >= size()))
    throw std::invalid_argument("ledger: agent id out of range");

  RoleAssignment a{rounds() + 1, std::move(selected)};
  for (auto& rec : agents_) {
    const bool chosen = a.contains(rec.id);
    const Role role = chosen ? selected_role_ : other(selected_role_);
    rec.streak = (rec.role && *rec.role == role) ? rec.streak + 1 : 0;
    rec.role = role;
    (role == Role::MaxReward ? rec.max_reward_count : rec.sacrifice_count) += 1;
    if (chosen) rec.last_selected_round = a.round;
    rec.window.push_back(chosen);
    while (static_cast<int>(rec.window.size()) > window_) rec.window.pop_front();
    rows_.push_back({a.round, rec.id, role, rec.streak, rec.sacrifice_count, rec.credited_reward});
  }
  history_.push_back(std::move(a));
  return history_.back();
}

void RotationLedger::credit(int id, double amount) {
  auto& rec = agents_.at(id);
  rec.credited_reward += amount;
  for (auto it = rows_.rbegin(); it != rows_.rend() && it->round == rounds(); ++it)
    if (it->agent_id == id) it->credited_reward = rec.credited_reward;
}

void RotationLedger::seed_state(int id, Role role, int streak) {
  if (streak < 0) throw std::invalid_argument("ledger: streak must be >= 0");
  auto& rec = agents_.at(id);
  rec.role = role;
  rec.streak = streak;
}

}  // namespace coopdyn::roles
