#include "coopdyn/ipd/match.hpp"

#include <cmath>

#include "coopdyn/errors.hpp"

namespace coopdyn::ipd {

void MatchConfig::validate() const {
  if (horizon < 1) throw ValidationError("match: horizon must be >= 1");
  if (!(discount >= 0.0 && discount < 1.0))
    throw ValidationError("match: discount must lie in [0, 1)");
}

MatchResult play_match(Strategy x, Strategy y, const PayoffMatrix& payoff, const MatchConfig& config) {
  config.validate();
  if (x.kind == StrategyKind::Alternator && !x.role_parity) x.role_parity = Parity::First;
  if (y.kind == StrategyKind::Alternator && !y.role_parity) y.role_parity = Parity::Second;

  MatchResult result;
  result.trajectory.reserve(config.horizon);
  std::vector<Action> hx, hy;
  hx.reserve(config.horizon);
  hy.reserve(config.horizon);

  double weight = 1.0;
  for (std::uint32_t t = 0; t < config.horizon; ++t) {
    const Action ax = x.next_action(hx, hy);
    const Action ay = y.next_action(hy, hx);
    const double px = payoff.payoff(ax, ay);
    const double py = payoff.payoff(ay, ax);
    result.trajectory.push_back({ax, ay, px, py});
    result.total_payoffs.first += px;
    result.total_payoffs.second += py;
    result.discounted_payoffs.first += weight * px;
    result.discounted_payoffs.second += weight * py;
    weight *= config.discount;
    hx.push_back(ax);
    hy.push_back(ay);
  }
  result.group_payoff_per_round =
      (result.total_payoffs.first + result.total_payoffs.second) / (2.0 * config.horizon);
  return result;
}

ScoreTable tournament(const std::vector<Strategy>& strategies, const PayoffMatrix& payoff,
                      const MatchConfig& config) {
  if (strategies.size() < 2)
    throw std::invalid_argument("tournament: need at least two strategies");
  const auto n = static_cast<Eigen::Index>(strategies.size());

  ScoreTable table;
  table.pair_payoff = Eigen::MatrixXd::Zero(n, n);
  table.pair_group = Eigen::MatrixXd::Zero(n, n);
  for (const auto& s : strategies) table.names.push_back(s.name());

  // Each ordered pair (a, b) seats a as x and b as y; every entry of the
  // pair matrices accumulates exactly two seatings.
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto r = play_match(strategies[a], strategies[b], payoff, config);
      table.pair_payoff(a, b) += r.discounted_payoffs.first;
      table.pair_payoff(b, a) += r.discounted_payoffs.second;
      table.pair_group(a, b) += r.group_payoff_per_round;
      table.pair_group(b, a) += r.group_payoff_per_round;
    }
  }
  table.pair_payoff /= 2.0;
  table.pair_group /= 2.0;
  table.mean_payoff = table.pair_payoff.rowwise().mean();
  table.mean_group = table.pair_group.rowwise().mean();
  return table;
}

}  // namespace coopdyn::ipd
