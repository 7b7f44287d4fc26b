#include "mvip/operators.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "mvip/errors.hpp"

namespace mvip {
namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

}  // namespace

Vector soft_threshold(const Vector& u, double tau) {
  require(tau >= 0.0, ErrorKind::InvalidArgument, "soft_threshold: tau must be nonnegative");
  Vector out(u.size());
  for (Index i = 0; i < u.size(); ++i)
    out[i] = sign(u[i]) * std::max(0.0, std::abs(u[i]) - tau);
  return out;
}

Vector shifted_soft_threshold(const Vector& x, double lambda, double rho, double beta) {
  const double scale = 1.0 + lambda * beta;
  return soft_threshold(x / scale, lambda * rho / scale);
}

Vector weighted_l1_prox(const Vector& u, double lambda, const Vector& penalty_weights,
                        const InnerProductSpace& space) {
  space.require_member(u, "weighted_l1_prox input");
  space.require_member(penalty_weights, "weighted_l1_prox penalty weights");
  const Vector& w = space.weights();
  Vector out(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    const double tau = lambda * penalty_weights[i] / w[i];
    out[i] = sign(u[i]) * std::max(0.0, std::abs(u[i]) - tau);
  }
  return out;
}

Vector quartic_fidelity_gradient(const Matrix& C, const Vector& v, const Vector& u) {
  require(C.rows() == v.size() && C.cols() == u.size(), ErrorKind::DimensionMismatch,
          "quartic_fidelity_gradient: C is " + std::to_string(C.rows()) + "x" +
              std::to_string(C.cols()) + ", v has " + std::to_string(v.size()) + ", u has " +
              std::to_string(u.size()));
  const Vector residual = C * u - v;
  return residual.squaredNorm() * (C.transpose() * residual);
}

Vector lpa_gradient(const Matrix& Q, const Vector& q, double mu, double alpha, const Vector& u) {
  require(Q.rows() == q.size() && Q.cols() == u.size(), ErrorKind::DimensionMismatch,
          "lpa_gradient: shape mismatch");
  require(alpha > 1.0 && alpha < 2.0, ErrorKind::InvalidArgument,
          "lpa_gradient: alpha must lie in (1, 2)");
  require(mu >= 0.0, ErrorKind::InvalidArgument, "lpa_gradient: mu must be nonnegative");
  Vector g = Q.transpose() * (Q * u - q);
  for (Index i = 0; i < u.size(); ++i) {
    if (u[i] != 0.0) g[i] += mu * alpha * sign(u[i]) * std::pow(std::abs(u[i]), alpha - 1.0);
  }
  return g;
}

Vector log_operator(const Vector& u) {
  return u.unaryExpr([](double x) { return x * std::log1p(std::abs(x)); });
}

Vector box_projection(const Vector& u, const Vector& lo, const Vector& hi) {
  require(u.size() == lo.size() && u.size() == hi.size(), ErrorKind::DimensionMismatch,
          "box_projection: bounds and input differ in length");
  for (Index i = 0; i < u.size(); ++i)
    require(lo[i] <= hi[i], ErrorKind::InvalidArgument,
            "box_projection: lo > hi in coordinate " + std::to_string(i));
  return u.cwiseMax(lo).cwiseMin(hi);
}

Vector ball_projection(const Vector& u, const Vector& center, double radius) {
  require(u.size() == center.size(), ErrorKind::DimensionMismatch,
          "ball_projection: center and input differ in length");
  require(radius >= 0.0, ErrorKind::InvalidArgument, "ball_projection: negative radius");
  const Vector offset = u - center;
  const double dist = offset.norm();
  if (dist <= radius) return u;
  return center + (radius / dist) * offset;
}

ForwardOperator make_zero_operator() {
  return {[](const Vector& u) -> Vector { return Vector::Zero(u.size()); }, "zero", 0.0};
}

ForwardOperator make_linear_operator(Matrix M, Vector offset) {
  require(M.rows() == M.cols() && M.rows() == offset.size(), ErrorKind::DimensionMismatch,
          "make_linear_operator: M must be square and match offset");
  auto data = std::make_shared<const std::pair<Matrix, Vector>>(std::move(M), std::move(offset));
  const double lip = data->first.operatorNorm();
  return {[data](const Vector& u) -> Vector { return data->first * u + data->second; },
          "linear", lip};
}

ForwardOperator make_cubic_operator() {
  return {[](const Vector& u) -> Vector { return u.array().cube().matrix(); }, "cubic",
          std::nullopt};
}

ForwardOperator make_log_operator() {
  return {[](const Vector& u) { return log_operator(u); }, "u*log(1+|u|)", std::nullopt};
}

ForwardOperator make_quartic_fidelity(Matrix C, Vector v) {
  require(C.rows() == v.size(), ErrorKind::DimensionMismatch,
          "make_quartic_fidelity: C rows must match v");
  auto data = std::make_shared<const std::pair<Matrix, Vector>>(std::move(C), std::move(v));
  return {[data](const Vector& u) { return quartic_fidelity_gradient(data->first, data->second, u); },
          "grad 1/4||Cu-v||^4", std::nullopt};
}

ForwardOperator make_lpa_gradient(Matrix Q, Vector q, double mu, double alpha) {
  require(alpha > 1.0 && alpha < 2.0, ErrorKind::InvalidArgument,
          "make_lpa_gradient: alpha must lie in (1, 2)");
  require(Q.rows() == q.size(), ErrorKind::DimensionMismatch, "make_lpa_gradient: Q rows must match q");
  auto data = std::make_shared<const std::pair<Matrix, Vector>>(std::move(Q), std::move(q));
  return {[data, mu, alpha](const Vector& u) {
            return lpa_gradient(data->first, data->second, mu, alpha, u);
          },
          "grad 1/2||Qu-q||^2 + mu sum|u|^alpha", std::nullopt};
}

ResolventOperator make_identity_resolvent() {
  return {[](const Vector& u, double) { return u; }, "identity"};
}

ResolventOperator make_l1_resolvent(double rho) {
  require(rho >= 0.0, ErrorKind::InvalidArgument, "make_l1_resolvent: rho must be nonnegative");
  return {[rho](const Vector& u, double lambda) { return soft_threshold(u, lambda * rho); },
          "soft-threshold"};
}

ResolventOperator make_shifted_l1_resolvent(double rho, double beta) {
  require(rho >= 0.0 && beta >= 0.0, ErrorKind::InvalidArgument,
          "make_shifted_l1_resolvent: rho and beta must be nonnegative");
  return {[rho, beta](const Vector& u, double lambda) {
            return shifted_soft_threshold(u, lambda, rho, beta);
          },
          "shifted soft-threshold"};
}

ResolventOperator make_weighted_l1_resolvent(Vector penalty_weights, InnerProductSpace space) {
  space.require_member(penalty_weights, "make_weighted_l1_resolvent penalty weights");
  auto data = std::make_shared<const std::pair<Vector, InnerProductSpace>>(std::move(penalty_weights),
                                                                          std::move(space));
  return {[data](const Vector& u, double lambda) {
            return weighted_l1_prox(u, lambda, data->first, data->second);
          },
          "weighted soft-threshold"};
}

ResolventOperator make_box_resolvent(Vector lo, Vector hi) {
  require(lo.size() == hi.size(), ErrorKind::DimensionMismatch, "make_box_resolvent: bound lengths differ");
  for (Index i = 0; i < lo.size(); ++i)
    require(lo[i] <= hi[i], ErrorKind::InvalidArgument, "make_box_resolvent: lo > hi");
  auto data = std::make_shared<const std::pair<Vector, Vector>>(std::move(lo), std::move(hi));
  return {[data](const Vector& u, double) { return box_projection(u, data->first, data->second); },
          "box projection"};
}

ResolventOperator make_ball_resolvent(Vector center, double radius) {
  require(radius >= 0.0, ErrorKind::InvalidArgument, "make_ball_resolvent: negative radius");
  auto c = std::make_shared<const Vector>(std::move(center));
  return {[c, radius](const Vector& u, double) { return ball_projection(u, *c, radius); },
          "ball projection"};
}

}  // namespace mvip
