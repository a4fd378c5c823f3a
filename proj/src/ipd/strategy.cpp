#include "coopdyn/ipd/strategy.hpp"

#include <algorithm>
#include <string>

#include "coopdyn/errors.hpp"

namespace coopdyn::ipd {

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::AllC: return "all_c";
    case StrategyKind::AllD: return "all_d";
    case StrategyKind::TitForTat: return "tit_for_tat";
    case StrategyKind::GrimTrigger: return "grim_trigger";
    case StrategyKind::WinStayLoseShift: return "wsls";
    case StrategyKind::Alternator: return "alternator";
  }
  return "unknown";
}

std::string_view to_string(Parity parity) { return parity == Parity::First ? "first" : "second"; }

StrategyKind strategy_kind_from_string(std::string_view name) {
  for (auto k : {StrategyKind::AllC, StrategyKind::AllD, StrategyKind::TitForTat,
                 StrategyKind::GrimTrigger, StrategyKind::WinStayLoseShift,
                 StrategyKind::Alternator}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown strategy kind '" + std::string(name) + "'");
}

Parity parity_from_string(std::string_view name) {
  if (name == "first") return Parity::First;
  if (name == "second") return Parity::Second;
  throw ValidationError("unknown role_parity '" + std::string(name) + "' (expected first|second)");
}

namespace {

// Punishment-phase flag for the round after the given joint history.
bool in_punishment(std::span<const Action> own, std::span<const Action> opponent, Parity own_parity,
                   std::optional<std::uint32_t> length) {
  const Parity opp_parity = opposite(own_parity);
  // Rounds remaining in the current punishment phase; nullopt = none active.
  std::optional<std::uint64_t> remaining;
  for (std::size_t t = 0; t < own.size(); ++t) {
    if (remaining) {
      if (*remaining > 0) --*remaining;
      if (*remaining == 0) remaining.reset();
      continue;
    }
    const bool deviated =
        own[t] != pattern_action(own_parity, t) || opponent[t] != pattern_action(opp_parity, t);
    if (deviated) {
      if (!length) return true;
      if (*length > 0) remaining = *length;
    }
  }
  return remaining.has_value();
}

}  // namespace

Action Strategy::next_action(std::span<const Action> own, std::span<const Action> opponent) const {
  if (own.size() != opponent.size())
    throw std::invalid_argument("strategy: history lengths differ");
  const std::size_t round = own.size();
  switch (kind) {
    case StrategyKind::AllC: return Action::Cooperate;
    case StrategyKind::AllD: return Action::Defect;
    case StrategyKind::TitForTat: return round == 0 ? Action::Cooperate : opponent.back();
    case StrategyKind::GrimTrigger:
      return std::find(opponent.begin(), opponent.end(), Action::Defect) == opponent.end()
                 ? Action::Cooperate
                 : Action::Defect;
    case StrategyKind::WinStayLoseShift:
      // T or R follow an opponent C; P or S follow an opponent D.
      if (round == 0) return Action::Cooperate;
      return opponent.back() == Action::Cooperate ? own.back() : flip(own.back());
    case StrategyKind::Alternator: {
      if (!role_parity) throw std::invalid_argument("alternator: role_parity unresolved");
      if (in_punishment(own, opponent, *role_parity, punishment_length)) return Action::Defect;
      return pattern_action(*role_parity, round);
    }
  }
  throw std::logic_error("unreachable strategy kind");
}

std::string Strategy::name() const {
  std::string out(to_string(kind));
  if (kind == StrategyKind::Alternator) {
    if (role_parity) out += std::string("[") + std::string(to_string(*role_parity)) + "]";
    if (punishment_length) out += "{" + std::to_string(*punishment_length) + "}";
  }
  return out;
}

}  // namespace coopdyn::ipd
