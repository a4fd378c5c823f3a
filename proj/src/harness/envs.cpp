#include "coopdyn/harness/envs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "coopdyn/mfg/model.hpp"
#include "coopdyn/random.hpp"

namespace coopdyn::harness {

DeltaScan delta_scan(const ipd::PayoffMatrix& payoff, const std::vector<double>& grid) {
  DeltaScan out;
  out.threshold = ipd::critical_discount(payoff);
  for (double d : grid) {
    if (!(d >= 0.0 && d < 1.0)) throw std::invalid_argument("delta_scan: grid point outside [0, 1)");
  }
  for (double d : grid) {
    DeltaScanRow row{};
    row.delta = d;
    row.stick = ipd::stick_payoff(payoff.T(), payoff.S(), d);
    row.deviate = ipd::deviate_payoff(payoff.T(), payoff.P(), d);
    const double diff = row.stick - row.deviate;
    const double scale = std::max({1.0, std::abs(row.stick), std::abs(row.deviate)});
    row.sign = std::abs(diff) <= 1e-12 * scale ? 0 : (diff > 0 ? 1 : -1);
    row.above_solved = out.threshold.solved && d > *out.threshold.solved;
    row.above_paper_formula = d > out.threshold.paper_formula;
    out.rows.push_back(row);
  }
  return out;
}

namespace {

roles::SwitchPolicy switch_policy(int n_agents, int selected, int window, double tau_s, std::optional<double> s0) {
  roles::SwitchPolicy p = roles::SwitchPolicy::for_population(n_agents, selected, tau_s);
  if (window > 0) p.window = window;
  if (s0) p.s0 = *s0;
  p.initial_selected = selected;
  p.validate();
  return p;
}

}  // namespace

DungeonLog run_dungeon(const DungeonConfig& config, std::uint64_t seed) {
  const int n = config.n_agents;
  DungeonLog log{roles::RotationLedger(n, roles::Role::Sacrifice, config.window), {}, std::vector<double>(n, 0.0), {}, 0.0};
  const auto policy = switch_policy(n, 1, config.window, config.tau_s, config.s0);
  Rng rng = make_rng(seed);

  for (int r = 1; r <= config.rounds; ++r) {
    std::vector<int> selected;
    switch (config.rotation) {
      case SacrificeSource::Static: selected = {0}; break;
      case SacrificeSource::Rotation: selected = roles::select_deterministic(log.ledger, 1); break;
      case SacrificeSource::Stochastic: {
        selected = roles::propose_stochastic(log.ledger, policy, rng);
        // Exactly one sacrificer: keep the least-served volunteer, or draft
        // one by the rotation order when nobody volunteered.
        if (selected.size() != 1) {
          const auto drafted = roles::select_deterministic(log.ledger, 1);
          if (selected.empty()) {
            selected = drafted;
          } else {
            const auto served = [&](int id) {
              const auto& rec = log.ledger.agent(id);
              return std::tuple(rec.sacrifice_count, rec.last_selected_round, id);
            };
            selected = {*std::min_element(selected.begin(), selected.end(),
                                          [&](int a, int b) { return served(a) < served(b); })};
          }
        }
        break;
      }
    }
    const auto& a = log.ledger.record(selected);
    const int sacrificer = a.selected.front();
    for (int id = 0; id < n; ++id)
      log.immediate_reward[id] += id == sacrificer ? -config.sacrifice_cost : config.success_reward;
    log.rounds.push_back({r, sacrificer, true});
  }
  const auto successes = std::count_if(log.rounds.begin(), log.rounds.end(), [](const auto& x) { return x.success; });
  log.group_outcome = config.success_reward * static_cast<double>(successes);
  log.delayed_credit = roles::delayed_credit(log.ledger, log.group_outcome, config.credit);
  return log;
}

IntersectionLog run_intersection(const IntersectionConfig& config, const mfg::MfgParams<double>& params,
                                 const mfg::PolicyTable<double>* policy, std::uint64_t seed) {
  const int n = config.n_agents;
  if (params.N != n || params.i != config.threshold)
    throw std::invalid_argument("run_intersection: reward params disagree with the environment size");
  if (config.source == MoverSource::Mfg && (!policy || policy->N() != n))
    throw std::invalid_argument("run_intersection: mfg source needs a policy over 0..n_agents");

  IntersectionLog log{roles::RotationLedger(n, roles::Role::MaxReward, config.window), {}, std::vector<double>(n, 0.0), {}, 0.0};
  const auto sw = switch_policy(n, config.cohort, config.window, config.tau_s,
                                config.s0 ? config.s0 : std::optional<double>(roles::binomial_coefficient(n - 1, config.threshold)));
  Rng rng = make_rng(seed);
  int previous = 0;

  for (int r = 1; r <= config.rounds; ++r) {
    std::vector<int> movers;
    switch (config.source) {
      case MoverSource::Static:
        for (int id = 0; id < config.cohort; ++id) movers.push_back(id);
        break;
      case MoverSource::Rotation: movers = roles::select_deterministic(log.ledger, config.cohort); break;
      case MoverSource::Stochastic: movers = roles::propose_stochastic(log.ledger, sw, rng); break;
      case MoverSource::Mfg: {
        const int t = std::min(r - 1, policy->horizon() - 1);
        const double p = policy->move_prob(t, previous);
        for (int id = 0; id < n; ++id)
          if (unit_uniform(rng) < p) movers.push_back(id);
        break;
      }
    }
    const auto& a = log.ledger.record(movers);
    const int j = static_cast<int>(a.selected.size());
    const bool passed = j <= config.threshold;
    for (int id = 0; id < n; ++id)
      log.immediate_reward[id] += mfg::per_agent_reward(a.contains(id) ? mfg::kMove : mfg::kWait, j, params);
    if (passed) log.group_outcome += j;
    log.rounds.push_back({r, a.selected, passed});
    previous = j;
  }
  log.delayed_credit = roles::delayed_credit(log.ledger, log.group_outcome, config.credit);
  return log;
}

}  // namespace coopdyn::harness
