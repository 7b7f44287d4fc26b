#pragma once

#include <Eigen/Dense>

namespace mvip {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Finite-dimensional real inner-product space with a diagonal weighting,
/// <u, v> = sum_i w_i u_i v_i. Unit weights give Euclidean R^d; quadrature
/// weights give a discretized L2 space.
class InnerProductSpace {
 public:
  /// Throws Error(InvalidArgument) unless every weight is finite and > 0.
  explicit InnerProductSpace(Vector weights);

  static InnerProductSpace euclidean(Index dimension);

  /// Composite trapezoidal rule on a uniform grid of `nodes` points over [0, 1].
  static InnerProductSpace trapezoidal(Index nodes);

  Index dimension() const { return weights_.size(); }
  const Vector& weights() const { return weights_; }
  bool is_euclidean() const { return unit_; }

  double dot(const Vector& u, const Vector& v) const;
  double squared_norm(const Vector& u) const { return dot(u, u); }
  double norm(const Vector& u) const;

  /// Throws Error(DimensionMismatch) if `u` does not live in this space.
  void require_member(const Vector& u, const char* what) const;

 private:
  Vector weights_;
  bool unit_ = false;
};

bool all_finite(const Vector& u);

}  // namespace mvip
