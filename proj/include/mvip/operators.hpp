#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mvip/space.hpp"

namespace mvip {

/// Single-valued monotone map B. Operators are pure; callers count evaluations.
struct ForwardOperator {
  std::function<Vector(const Vector&)> eval;
  std::string label;
  std::optional<double> lipschitz_hint;  // metadata only

  Vector operator()(const Vector& u) const { return eval(u); }
};

/// Maximal monotone A, exposed only through its resolvent J_{lambda A} = (I + lambda A)^{-1}.
struct ResolventOperator {
  std::function<Vector(const Vector&, double)> apply;
  std::string label;

  Vector operator()(const Vector& u, double lambda) const { return apply(u, lambda); }
};

/// Find u with 0 in A(u) + B(u).
struct InclusionProblem {
  ForwardOperator forward;
  ResolventOperator resolvent;
  InnerProductSpace space;
};

// Pointwise kernels.

/// sgn(u_i) * max(0, |u_i| - tau). Prox of tau * ||.||_1.
Vector soft_threshold(const Vector& u, double tau);

/// Resolvent of A = rho * d||.||_1 + beta * I:
/// soft(x / (1 + lambda beta), lambda rho / (1 + lambda beta)).
Vector shifted_soft_threshold(const Vector& x, double lambda, double rho, double beta);

/// Prox of lambda * sum_i c_i |x_i| measured in the weighted norm of `space`,
/// i.e. coordinatewise soft(u_i, lambda c_i / w_i).
Vector weighted_l1_prox(const Vector& u, double lambda, const Vector& penalty_weights,
                        const InnerProductSpace& space);

/// ||Cu - v||^2 C^T (Cu - v), the gradient of 1/4 ||Cu - v||^4.
Vector quartic_fidelity_gradient(const Matrix& C, const Vector& v, const Vector& u);

/// Q^T (Qu - q) + mu alpha sgn(u_i) |u_i|^(alpha - 1); the penalty term is 0 at u_i = 0.
Vector lpa_gradient(const Matrix& Q, const Vector& q, double mu, double alpha, const Vector& u);

/// u_i log(1 + |u_i|).
Vector log_operator(const Vector& u);

/// Componentwise clamp to [lo, hi]. Throws Error(InvalidArgument) if lo_i > hi_i.
Vector box_projection(const Vector& u, const Vector& lo, const Vector& hi);

/// Euclidean projection onto the closed ball {x : ||x - center|| <= radius}.
Vector ball_projection(const Vector& u, const Vector& center, double radius);

// Operator factories. Captured data is shared and immutable.

ForwardOperator make_zero_operator();
ForwardOperator make_linear_operator(Matrix M, Vector offset);  // u -> M u + offset
ForwardOperator make_cubic_operator();                          // u -> u^3 componentwise
ForwardOperator make_log_operator();
ForwardOperator make_quartic_fidelity(Matrix C, Vector v);
ForwardOperator make_lpa_gradient(Matrix Q, Vector q, double mu, double alpha);

ResolventOperator make_identity_resolvent();                 // A = 0
ResolventOperator make_l1_resolvent(double rho);             // A = rho d||.||_1
ResolventOperator make_shifted_l1_resolvent(double rho, double beta);
ResolventOperator make_weighted_l1_resolvent(Vector penalty_weights, InnerProductSpace space);
ResolventOperator make_box_resolvent(Vector lo, Vector hi);  // A = N_K, K a box
ResolventOperator make_ball_resolvent(Vector center, double radius);

}  // namespace mvip
