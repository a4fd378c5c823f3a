#pragma once

#include <string_view>

namespace coopdyn::ipd {

enum class Action : int { Cooperate = 0, Defect = 1 };

constexpr Action flip(Action a) {
  return a == Action::Cooperate ? Action::Defect : Action::Cooperate;
}
constexpr char to_char(Action a) { return a == Action::Cooperate ? 'C' : 'D'; }

// Sign of 2R - (T + S).
enum class Regime { Classic, AlternationFavoring, Boundary };

std::string_view to_string(Regime r);

/// Prisoner's dilemma payoffs. Construction enforces T > R > P > S.
class PayoffMatrix {
 public:
  PayoffMatrix(double T, double R, double P, double S);

  double T() const { return T_; }
  double R() const { return R_; }
  double P() const { return P_; }
  double S() const { return S_; }

  Regime regime() const;

  /// Payoff to the player choosing `own` against `other`.
  double payoff(Action own, Action other) const;

 private:
  double T_, R_, P_, S_;
};

Regime classify(const PayoffMatrix& payoff);

}  // namespace coopdyn::ipd
