#include "coopdyn/ipd/payoff.hpp"

#include <cmath>
#include <string>

#include "coopdyn/errors.hpp"

namespace coopdyn::ipd {

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Classic: return "classic";
    case Regime::AlternationFavoring: return "alternation_favoring";
    case Regime::Boundary: return "boundary";
  }
  return "unknown";
}

PayoffMatrix::PayoffMatrix(double T, double R, double P, double S) : T_(T), R_(R), P_(P), S_(S) {
  if (!(std::isfinite(T) && std::isfinite(R) && std::isfinite(P) && std::isfinite(S)))
    throw ValidationError("payoff matrix: all payoffs must be finite");
  if (!(T > R)) throw ValidationError("payoff matrix: violated T > R");
  if (!(R > P)) throw ValidationError("payoff matrix: violated R > P");
  if (!(P > S)) throw ValidationError("payoff matrix: violated P > S");
}

Regime PayoffMatrix::regime() const {
  const double lhs = 2.0 * R_;
  const double rhs = T_ + S_;
  if (lhs > rhs) return Regime::Classic;
  if (lhs < rhs) return Regime::AlternationFavoring;
  return Regime::Boundary;
}

double PayoffMatrix::payoff(Action own, Action other) const {
  if (own == Action::Cooperate) return other == Action::Cooperate ? R_ : S_;
  return other == Action::Cooperate ? T_ : P_;
}

Regime classify(const PayoffMatrix& payoff) { return payoff.regime(); }

}  // namespace coopdyn::ipd
