#pragma once

#include <cmath>
#include <vector>

#include "coopdyn/errors.hpp"
#include "coopdyn/mfg/params.hpp"

namespace coopdyn::mfg {

/// pi(a | j, t) for t = 0..H-1; each slice is (N+1) x 2 with rows summing to one.
template <typename Scalar = double>
class PolicyTable {
 public:
  PolicyTable() = default;
  explicit PolicyTable(std::vector<ActionMatrix<Scalar>> slices) : slices_(std::move(slices)) {}

  static PolicyTable uniform(int horizon, int N) {
    return PolicyTable(std::vector<ActionMatrix<Scalar>>(
        horizon, ActionMatrix<Scalar>::Constant(N + 1, 2, Scalar(0.5))));
  }

  /// Every agent moves with probability `p_move` regardless of (t, j).
  static PolicyTable constant(int horizon, int N, Scalar p_move) {
    ActionMatrix<Scalar> s(N + 1, 2);
    s.col(kWait).setConstant(Scalar(1) - p_move);
    s.col(kMove).setConstant(p_move);
    return PolicyTable(std::vector<ActionMatrix<Scalar>>(horizon, s));
  }

  int horizon() const { return static_cast<int>(slices_.size()); }
  int N() const { return slices_.empty() ? -1 : static_cast<int>(slices_.front().rows()) - 1; }

  const ActionMatrix<Scalar>& slice(int t) const { return slices_.at(t); }
  ActionMatrix<Scalar>& slice(int t) { return slices_.at(t); }
  Scalar move_prob(int t, int j) const { return slices_[t](j, kMove); }

  /// Rows sum to one within 1e-12 and entries lie in [0, 1].
  void validate() const {
    using std::abs;
    for (const auto& s : slices_) {
      if (!s.allFinite() || (s.array() < 0).any() || (s.array() > 1).any())
        throw NumericalIntegrityError("policy: entries must lie in [0, 1]");
      if (((s.rowwise().sum().array() - Scalar(1)).abs() > Scalar(1e-12)).any())
        throw NumericalIntegrityError("policy: row does not sum to one");
    }
  }

  /// Max-norm distance to another table of the same shape.
  Scalar distance(const PolicyTable& other) const {
    Scalar d(0);
    for (std::size_t t = 0; t < slices_.size(); ++t)
      d = std::max(d, (slices_[t] - other.slices_[t]).cwiseAbs().maxCoeff());
    return d;
  }

 private:
  std::vector<ActionMatrix<Scalar>> slices_;
};

/// q(t, j, a) and v(t, j) = max_a q(t, j, a) for t = 0..H; layer H is zero.
template <typename Scalar = double>
struct ActionValueTable {
  std::vector<ActionMatrix<Scalar>> q;
  std::vector<Vector<Scalar>> v;

  int horizon() const { return static_cast<int>(q.size()) - 1; }
};

}  // namespace coopdyn::mfg
