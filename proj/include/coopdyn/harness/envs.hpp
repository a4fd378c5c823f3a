#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coopdyn/harness/config.hpp"
#include "coopdyn/ipd/discount.hpp"
#include "coopdyn/mfg/tables.hpp"
#include "coopdyn/roles/assign.hpp"
#include "coopdyn/roles/credit.hpp"

namespace coopdyn::harness {

struct DeltaScanRow {
  double delta;
  double stick;
  double deviate;
  int sign;  // sign of stick - deviate; 0 within 1e-12 relative
  bool above_solved;
  bool above_paper_formula;
};

struct DeltaScan {
  ipd::CriticalDiscount threshold;
  std::vector<DeltaScanRow> rows;
};

/// Stick and deviate values over a discount grid, flagged against both thresholds.
DeltaScan delta_scan(const ipd::PayoffMatrix& payoff, const std::vector<double>& grid);

struct DungeonRound {
  int round;
  int sacrificer;
  bool success;
};

struct DungeonLog {
  roles::RotationLedger ledger;
  std::vector<DungeonRound> rounds;
  std::vector<double> immediate_reward;  // per agent
  std::vector<double> delayed_credit;    // per agent
  double group_outcome = 0.0;
};

/// One sacrificer per round lets the other n - 1 escape. Escapers earn
/// success_reward, the sacrificer pays sacrifice_cost, and at episode end the
/// sacrificers are credited success_reward x successful rounds.
DungeonLog run_dungeon(const DungeonConfig& config, std::uint64_t seed);

struct IntersectionRound {
  int round;
  std::vector<int> movers;
  bool passed;
};

struct IntersectionLog {
  roles::RotationLedger ledger;
  std::vector<IntersectionRound> rounds;
  std::vector<double> immediate_reward;
  std::vector<double> delayed_credit;
  double group_outcome = 0.0;  // total passes
};

/// Threshold rule per round: with j movers, all pass iff j <= i, otherwise
/// nobody moves. Each agent earns per_agent_reward(a, j). `policy` is
/// required for MoverSource::Mfg and indexed by min(round - 1, H - 1) and the
/// previous round's count.
IntersectionLog run_intersection(const IntersectionConfig& config, const mfg::MfgParams<double>& params,
                                 const mfg::PolicyTable<double>* policy, std::uint64_t seed);

}  // namespace coopdyn::harness
