#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "coopdyn/errors.hpp"

namespace coopdyn::mfg {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Rows are move counts j, columns are actions (0 = wait, 1 = move).
template <typename Scalar>
using ActionMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

inline constexpr int kWait = 0;
inline constexpr int kMove = 1;

enum class RewardMode { Formula, Table };

inline std::string_view to_string(RewardMode m) { return m == RewardMode::Formula ? "formula" : "table"; }

inline RewardMode reward_mode_from_string(std::string_view s) {
  if (s == "formula") return RewardMode::Formula;
  if (s == "table") return RewardMode::Table;
  throw ValidationError("unknown reward_mode '" + std::string(s) + "' (expected formula|table)");
}

/// Four-case per-agent reward; the regime is uncongested iff j <= i.
/// Defaults are design values respecting the good/good/low/least ranking.
template <typename Scalar>
struct RewardTable {
  Scalar move_uncongested = Scalar(1.0);
  Scalar wait_uncongested = Scalar(0.6);
  Scalar wait_congested = Scalar(0.2);
  Scalar move_congested = Scalar(0.0);
};

template <typename Scalar = double>
struct MfgParams {
  int N = 20;
  int i = 8;
  Scalar delta = Scalar(0.9);
  Scalar kappa = Scalar(1);
  Scalar B = Scalar(0);
  Scalar alpha = Scalar(0);
  Scalar b_base = Scalar(0);
  Scalar tau = Scalar(1);
  int horizon = 20;
  RewardMode reward_mode = RewardMode::Table;
  RewardTable<Scalar> reward_table{};
  // Empty means a point mass at j = 0.
  std::optional<Vector<Scalar>> initial;
  // Reject tables that break the move/wait ranking. Off only for degenerate
  // experiments such as all-equal rewards.
  bool enforce_reward_ranking = true;

  int states() const { return N + 1; }

  Vector<Scalar> initial_probs() const {
    if (initial) return *initial;
    Vector<Scalar> p = Vector<Scalar>::Zero(states());
    p(0) = Scalar(1);
    return p;
  }

  void validate() const {
    using std::abs;
    using std::isfinite;
    if (N < 2) throw ValidationError("mfg: N must be >= 2");
    if (!(i > 0 && i < N)) throw ValidationError("mfg: threshold i must satisfy 0 < i < N");
    if (!(delta >= 0 && delta < 1)) throw ValidationError("mfg: delta must lie in [0, 1)");
    if (!(kappa > 0)) throw ValidationError("mfg: kappa must be > 0");
    if (!(tau > 0)) throw ValidationError("mfg: tau must be > 0");
    if (!(alpha >= 0)) throw ValidationError("mfg: alpha must be >= 0");
    if (!isfinite(B) || !isfinite(b_base)) throw ValidationError("mfg: B and b_base must be finite");
    if (horizon < 1) throw ValidationError("mfg: horizon must be >= 1");
    if (reward_mode == RewardMode::Table && enforce_reward_ranking) {
      const auto& r = reward_table;
      if (!(r.move_uncongested > r.wait_uncongested && r.wait_uncongested >= r.wait_congested &&
            r.wait_congested > r.move_congested))
        throw ValidationError(
            "mfg: reward_table must satisfy move|uncongested > wait|uncongested >= "
            "wait|congested > move|congested");
    }
    if (initial) {
      const auto& p = *initial;
      if (p.size() != states())
        throw ValidationError("mfg: initial_distribution must have N + 1 entries");
      if (!p.allFinite() || (p.array() < 0).any())
        throw ValidationError("mfg: initial_distribution entries must be finite and >= 0");
      if (abs(p.sum() - Scalar(1)) > Scalar(1e-12))
        throw ValidationError("mfg: initial_distribution must sum to 1");
    }
  }
};

/// N=20, i=8, delta=0.9, tau=0.2 with the default table rewards.
template <typename Scalar = double>
MfgParams<Scalar> default_instance() {
  MfgParams<Scalar> p;
  p.tau = Scalar(0.2);
  return p;
}

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 500;
  double damping = 0.5;

  void validate() const {
    if (!(tol > 0)) throw ValidationError("solver: tol must be > 0");
    if (max_iter < 1) throw ValidationError("solver: max_iter must be >= 1");
    if (!(damping > 0 && damping <= 1)) throw ValidationError("solver: damping must lie in (0, 1]");
  }
};

}  // namespace coopdyn::mfg
