#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "coopdyn/errors.hpp"
#include "coopdyn/mfg/params.hpp"

namespace coopdyn::mfg {

inline constexpr double kNormalizationTolerance = 1e-12;

/// Probability vector over move counts j = 0..N.
template <typename Scalar = double>
class StateDistribution {
 public:
  StateDistribution() = default;

  /// Validates nonnegativity and unit mass (within 1e-12).
  static StateDistribution from_probs(Vector<Scalar> probs) {
    using std::abs;
    if (probs.size() < 1 || !probs.allFinite() || (probs.array() < 0).any())
      throw ValidationError("distribution: entries must be finite and nonnegative");
    if (abs(probs.sum() - Scalar(1)) > Scalar(kNormalizationTolerance))
      throw ValidationError("distribution: not normalized");
    return StateDistribution(std::move(probs));
  }

  static StateDistribution point_mass(int N, int j) {
    Vector<Scalar> p = Vector<Scalar>::Zero(N + 1);
    p(j) = Scalar(1);
    return StateDistribution(std::move(p));
  }

  static StateDistribution uniform(int N) {
    return StateDistribution(Vector<Scalar>::Constant(N + 1, Scalar(1) / Scalar(N + 1)));
  }

  const Vector<Scalar>& probs() const { return probs_; }
  Scalar operator[](Eigen::Index j) const { return probs_(j); }
  Eigen::Index size() const { return probs_.size(); }
  int N() const { return static_cast<int>(probs_.size()) - 1; }

  Scalar mean() const {
    return probs_.dot(Vector<Scalar>::LinSpaced(probs_.size(), Scalar(0), Scalar(probs_.size() - 1)));
  }

 private:
  explicit StateDistribution(Vector<Scalar> p) : probs_(std::move(p)) {}
  template <typename S>
  friend StateDistribution<S> renormalized(Vector<S> raw, const char* where);

  Vector<Scalar> probs_;
};

/// Asserts the mass drifted by at most 1e-12, then rescales to exactly one.
template <typename Scalar>
StateDistribution<Scalar> renormalized(Vector<Scalar> raw, const char* where) {
  using std::abs;
  if (!raw.allFinite())
    throw NumericalIntegrityError(std::string(where) + ": non-finite probability");
  const Scalar mass = raw.sum();
  if (abs(mass - Scalar(1)) > Scalar(kNormalizationTolerance))
    throw NumericalIntegrityError(std::string(where) + ": probability mass drifted to " +
                                  std::to_string(static_cast<double>(mass)));
  raw /= mass;
  return StateDistribution<Scalar>(std::move(raw));
}

template <typename Scalar>
Scalar logistic_term(int a, int j, const MfgParams<Scalar>& params) {
  using std::exp;
  const Scalar exponent = Scalar(1 - 2 * a) * Scalar(params.i - j) / params.kappa;
  return Scalar(1) / (Scalar(1) + exp(exponent));
}

template <typename Scalar>
Scalar per_agent_reward(int a, int j, const MfgParams<Scalar>& params) {
  if (params.reward_mode == RewardMode::Formula) return logistic_term(a, j, params) + params.B;
  const auto& r = params.reward_table;
  if (j <= params.i) return a == kMove ? r.move_uncongested : r.wait_uncongested;
  return a == kMove ? r.move_congested : r.wait_congested;
}

/// Expected logistic term over the mean field, plus the offset B.
template <typename Scalar>
Scalar group_reward(const Vector<Scalar>& P, int a, const MfgParams<Scalar>& params) {
  using std::abs;
  if (P.size() != params.states()) throw ValidationError("group_reward: distribution size != N + 1");
  if (!P.allFinite() || (P.array() < 0).any() ||
      abs(P.sum() - Scalar(1)) > Scalar(kNormalizationTolerance))
    throw ValidationError("group_reward: distribution not normalized");
  Scalar acc(0);
  for (int j = 0; j <= params.N; ++j) acc += P(j) * logistic_term(a, j, params);
  return acc + params.B;
}

template <typename Scalar>
Scalar group_reward(const StateDistribution<Scalar>& P, int a, const MfgParams<Scalar>& params) {
  return group_reward(P.probs(), a, params);
}

/// Per-agent reward minus the consistency penalty alpha |j - i|, plus b_base.
template <typename Scalar>
Scalar utility(int a, int j, const MfgParams<Scalar>& params) {
  using std::abs;
  return per_agent_reward(a, j, params) - params.alpha * Scalar(abs(j - params.i)) + params.b_base;
}

/// U(a, j) for all j as an (N+1) x 2 matrix.
template <typename Scalar>
ActionMatrix<Scalar> utility_matrix(const MfgParams<Scalar>& params) {
  ActionMatrix<Scalar> u(params.states(), 2);
  for (int j = 0; j <= params.N; ++j)
    for (int a = 0; a < 2; ++a) u(j, a) = utility(a, j, params);
  return u;
}

/// Binomial(n, p) probability vectors for a fixed n. Remembers the last p,
/// since policies are often piecewise constant in j.
template <typename Scalar>
class BinomialPmf {
 public:
  explicit BinomialPmf(int n) : n_(n), log_coeff_(n + 1) {
    using std::lgamma;
    const Scalar top = lgamma(Scalar(n + 1));
    for (int k = 0; k <= n; ++k)
      log_coeff_(k) = top - lgamma(Scalar(k + 1)) - lgamma(Scalar(n - k + 1));
  }

  int n() const { return n_; }

  const Vector<Scalar>& operator()(Scalar p) {
    using std::exp;
    using std::log;
    using std::log1p;
    if (cached_ && p == last_p_) return pmf_;
    if (!(p >= 0 && p <= 1)) throw NumericalIntegrityError("binomial: probability outside [0, 1]");
    pmf_ = Vector<Scalar>::Zero(n_ + 1);
    if (p == Scalar(0)) {
      pmf_(0) = 1;
    } else if (p == Scalar(1)) {
      pmf_(n_) = 1;
    } else {
      const Scalar lp = log(p);
      const Scalar lq = log1p(-p);
      Vector<Scalar> logs(n_ + 1);
      for (int k = 0; k <= n_; ++k) logs(k) = log_coeff_(k) + Scalar(k) * lp + Scalar(n_ - k) * lq;
      const Scalar top = logs.maxCoeff();
      for (int k = 0; k <= n_; ++k) pmf_(k) = exp(logs(k) - top);
      pmf_ /= pmf_.sum();
    }
    last_p_ = p;
    cached_ = true;
    return pmf_;
  }

 private:
  int n_;
  Vector<Scalar> log_coeff_;
  Vector<Scalar> pmf_;
  Scalar last_p_{};
  bool cached_ = false;
};

/// Law of the next move count: own action a plus Binomial(N - 1, p_move)
/// moving peers. The previous count enters only through p_move.
template <typename Scalar>
StateDistribution<Scalar> transition_distribution(int j_prev, int a, Scalar p_move, int N) {
  if (N < 1 || j_prev < 0 || j_prev > N) throw std::invalid_argument("transition: state out of range");
  if (a != kWait && a != kMove) throw std::invalid_argument("transition: action must be 0 or 1");
  BinomialPmf<Scalar> peers(N - 1);
  Vector<Scalar> out = Vector<Scalar>::Zero(N + 1);
  out.segment(a, N) = peers(p_move);
  return renormalized(std::move(out), "transition_distribution");
}

/// Temperature-scaled SoftMax over the two action values, max-subtracted.
template <typename Scalar>
Eigen::Matrix<Scalar, 1, 2> softmax_policy(const Eigen::Matrix<Scalar, 1, 2>& q, Scalar tau) {
  using std::exp;
  if (!q.allFinite()) throw NumericalIntegrityError("softmax_policy: non-finite action value");
  if (!(tau > 0)) throw std::invalid_argument("softmax_policy: tau must be > 0");
  const Scalar top = q.maxCoeff();
  Eigen::Matrix<Scalar, 1, 2> w;
  w(0) = exp((q(0) - top) / tau);
  w(1) = exp((q(1) - top) / tau);
  return w / w.sum();
}

/// Index of the larger action value; wait wins exact ties.
template <typename Scalar>
int greedy_action(Scalar q_wait, Scalar q_move) {
  return q_move > q_wait ? kMove : kWait;
}

}  // namespace coopdyn::mfg
