#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "coopdyn/ipd/payoff.hpp"

namespace coopdyn::ipd {

enum class StrategyKind { AllC, AllD, TitForTat, GrimTrigger, WinStayLoseShift, Alternator };

// Which player of an alternating pair defects in round 0.
enum class Parity { First, Second };

constexpr Parity opposite(Parity p) { return p == Parity::First ? Parity::Second : Parity::First; }

std::string_view to_string(StrategyKind kind);
std::string_view to_string(Parity parity);
StrategyKind strategy_kind_from_string(std::string_view name);
Parity parity_from_string(std::string_view name);

/// Action the alternating agreement prescribes for a player of `parity` in `round`.
constexpr Action pattern_action(Parity parity, std::size_t round) {
  const bool defect_on_even = parity == Parity::First;
  return ((round % 2 == 0) == defect_on_even) ? Action::Defect : Action::Cooperate;
}

/// Deterministic memory-based strategy.
///
/// Alternator follows the (D,C),(C,D),... agreement. Both players of a match
/// replay the same agreement state machine over the joint history: a departure
/// from the pattern while the agreement is intact opens a punishment phase of
/// `punishment_length` rounds (forever when unset) in which both players
/// defect, after which the pattern resumes on its round parity. Departures
/// during a punishment phase do not open a new one.
struct Strategy {
  StrategyKind kind = StrategyKind::AllC;
  // Alternator only. Unset means "decided by seat order in the match".
  std::optional<Parity> role_parity;
  // Alternator only. Unset means infinite.
  std::optional<std::uint32_t> punishment_length;

  static Strategy all_c() { return {StrategyKind::AllC, {}, {}}; }
  static Strategy all_d() { return {StrategyKind::AllD, {}, {}}; }
  static Strategy tit_for_tat() { return {StrategyKind::TitForTat, {}, {}}; }
  static Strategy grim_trigger() { return {StrategyKind::GrimTrigger, {}, {}}; }
  static Strategy wsls() { return {StrategyKind::WinStayLoseShift, {}, {}}; }
  static Strategy alternator(std::optional<Parity> parity = {},
                             std::optional<std::uint32_t> punishment = {}) {
    return {StrategyKind::Alternator, parity, punishment};
  }

  /// Next action given both full histories (equal length). Alternator requires
  /// role_parity to be resolved.
  Action next_action(std::span<const Action> own, std::span<const Action> opponent) const;

  std::string name() const;
};

}  // namespace coopdyn::ipd
