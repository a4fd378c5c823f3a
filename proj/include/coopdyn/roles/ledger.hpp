#pragma once

#include <deque>
#include <optional>
#include <string_view>
#include <vector>

namespace coopdyn::roles {

// MaxReward: mover / escaper. Sacrifice: waiter / sacrificer.
enum class Role { MaxReward, Sacrifice };

constexpr Role other(Role r) { return r == Role::MaxReward ? Role::Sacrifice : Role::MaxReward; }
std::string_view to_string(Role r);

/// Agents placed in the ledger's selected role for one round; ids sorted, unique.
struct RoleAssignment {
  int round = 0;  // 1-based
  std::vector<int> selected;

  bool contains(int id) const;
};

struct AgentRecord {
  int id = 0;
  // Most recent last; true when the agent held the selected role that round.
  std::deque<bool> window;
  int streak = 0;
  int max_reward_count = 0;
  int sacrifice_count = 0;
  double credited_reward = 0.0;
  int last_selected_round = 0;  // 0 = never
  std::optional<Role> role;
};

/// One CSV row: the agent's state right after a round was recorded.
struct LedgerRow {
  int round;
  int agent_id;
  Role role;
  int streak;
  int cumulative_sacrifices;
  double credited_reward;
};

/// Per-agent rotation memory. `selected_role` is the role rotations hand out:
/// Sacrifice for the dungeon, MaxReward (move) for the intersection.
class RotationLedger {
 public:
  /// window 0 selects the default N - 1 (at least 1).
  RotationLedger(int n_agents, Role selected_role, int window = 0);

  int size() const { return static_cast<int>(agents_.size()); }
  int window() const { return window_; }
  Role selected_role() const { return selected_role_; }
  int rounds() const { return static_cast<int>(history_.size()); }

  const AgentRecord& agent(int id) const { return agents_.at(id); }
  const std::vector<AgentRecord>& agents() const { return agents_; }
  const std::vector<RoleAssignment>& history() const { return history_; }
  const std::vector<LedgerRow>& rows() const { return rows_; }

  Role role_in(const RoleAssignment& a, int id) const {
    return a.contains(id) ? selected_role_ : other(selected_role_);
  }

  /// Held the selected role in any of the last `window` rounds.
  bool served_in_window(int id) const;

  /// Appends the round (numbered rounds() + 1) and updates every record.
  const RoleAssignment& record(std::vector<int> selected);

  /// Adds delayed credit; the latest round's rows reflect the new totals.
  void credit(int id, double amount);

  /// Overrides an agent's streak and role, for experiments that start
  /// mid-history.
  void seed_state(int id, Role role, int streak);

 private:
  int window_;
  Role selected_role_;
  std::vector<AgentRecord> agents_;
  std::vector<RoleAssignment> history_;
  std::vector<LedgerRow> rows_;
};

}  // namespace coopdyn::roles
