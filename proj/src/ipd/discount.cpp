#include "coopdyn/ipd/discount.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "coopdyn/errors.hpp"

namespace coopdyn::ipd {

namespace {

void check_delta(double delta) {
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::domain_error(fmt::format("discount {} outside [0, 1)", delta));
}

}  // namespace

double stick_payoff(double T, double S, double delta) {
  check_delta(delta);
  return (T + S * delta) / (1.0 - delta * delta);
}

double deviate_payoff(double T, double P, double delta) {
  check_delta(delta);
  return T + P * delta / (1.0 - delta);
}

CriticalDiscount critical_discount_raw(double T, double P, double S) {
  if (!(T > P && P >= S)) throw ValidationError("critical_discount: requires T > P >= S");
  CriticalDiscount out;
  out.paper_formula = std::numeric_limits<double>::quiet_NaN();

  if (P == S) {
    out.solved = 0.0;
    out.diagnostic = "P == S: sticking beats deviating for every discount in (0, 1)";
    return out;
  }
  if (P - S >= T - P) {
    out.diagnostic = fmt::format(
        "no discount below 1 satisfies the condition: (P - S)/(T - P) = {} >= 1", (P - S) / (T - P));
    return out;
  }

  const auto gain = [&](double d) { return stick_payoff(T, S, d) - deviate_payoff(T, P, d); };

  // gain < 0 just above 0 and > 0 close enough to 1; walk hi toward 1 until
  // the sign flips.
  double lo = 0.0;
  double hi = 0.5;
  while (gain(hi) <= 0.0) {
    lo = hi;
    hi = 0.5 * (1.0 + hi);
    if (hi >= 1.0) {
      out.diagnostic = "bisection failed to bracket the root below 1";
      return out;
    }
  }
  while (hi - lo > 0.25 * kCriticalDiscountTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (gain(mid) > 0.0 ? hi : lo) = mid;
  }
  out.solved = 0.5 * (lo + hi);
  out.diagnostic = "bisection on sign of stick - deviate";
  return out;
}

CriticalDiscount critical_discount(const PayoffMatrix& payoff) {
  auto out = critical_discount_raw(payoff.T(), payoff.P(), payoff.S());
  out.paper_formula = (payoff.P() - payoff.S()) / (payoff.T() - payoff.R());
  return out;
}

}  // namespace coopdyn::ipd
