#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "coopdyn/ipd/payoff.hpp"
#include "coopdyn/ipd/strategy.hpp"

namespace coopdyn::ipd {

struct MatchConfig {
  std::uint32_t horizon = 100;
  double discount = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Round {
  Action x;
  Action y;
  double payoff_x;
  double payoff_y;
};

struct MatchResult {
  std::vector<Round> trajectory;
  std::pair<double, double> discounted_payoffs{0.0, 0.0};
  std::pair<double, double> total_payoffs{0.0, 0.0};
  // Mean payoff per player per round.
  double group_payoff_per_round = 0.0;
};

/// Plays `config.horizon` rounds. Alternators without an explicit parity take
/// First in seat x and Second in seat y.
MatchResult play_match(Strategy x, Strategy y, const PayoffMatrix& payoff, const MatchConfig& config);

struct ScoreTable {
  std::vector<std::string> names;
  // pair_payoff(a, b): mean discounted payoff of a against b over both seatings.
  Eigen::MatrixXd pair_payoff;
  Eigen::MatrixXd pair_group;
  Eigen::VectorXd mean_payoff;
  Eigen::VectorXd mean_group;
};

/// Round robin over every ordered pair (a, b), mirror matches included.
ScoreTable tournament(const std::vector<Strategy>& strategies, const PayoffMatrix& payoff,
                      const MatchConfig& config);

}  // namespace coopdyn::ipd
