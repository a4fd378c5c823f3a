#pragma once

#include <optional>
#include <string>

#include "coopdyn/ipd/payoff.hpp"

namespace coopdyn::ipd {

/// Discounted value of the alternating stream T, S d, T d^2, S d^3, ...
double stick_payoff(double T, double S, double delta);

/// Discounted value of T followed by P forever.
double deviate_payoff(double T, double P, double delta);

struct CriticalDiscount {
  // Root of stick - deviate found by bisection; nullopt when no discount
  // below 1 makes sticking strictly better.
  std::optional<double> solved;
  // (P - S) / (T - R), the threshold as usually printed.
  double paper_formula = 0.0;
  std::string diagnostic;
};

/// Bisection tolerance on the solved threshold.
inline constexpr double kCriticalDiscountTolerance = 1e-10;

CriticalDiscount critical_discount(const PayoffMatrix& payoff);

/// Raw-payoff variant; requires T > P >= S. Reports paper_formula as NaN
/// since R is not supplied.
CriticalDiscount critical_discount_raw(double T, double P, double S);

}  // namespace coopdyn::ipd
