#pragma once

#include "mvip/operators.hpp"

namespace mvip {

/// Armijo-type backtracking: lambda = initial_step * shrink^j.
struct LineSearchParams {
  double initial_step = 1.0;  // s > 0
  double shrink = 0.5;        // mu in (0, 1)
  double ratio = 0.9;         // sigma in (0, 1)
  int max_backtracks = 60;

  /// Throws Error(InvalidArgument) on out-of-range values.
  void validate() const;

  double step_at(int j) const;
};

struct LineSearchOutcome {
  double step_size = 0.0;  // lambda = s * mu^j
  int backtracks = 0;      // j
  Vector v;                // J(w - lambda B(w), lambda)
  Vector forward_w;        // B(w), cached
  Vector forward_v;        // B(v), cached
  long resolvent_evals = 0;
  long forward_evals = 0;
};

/// One trial of the acceptance test at a given step.
struct ArmijoTrial {
  Vector v;
  Vector forward_v;
  double lhs = 0.0;  // lambda ||B(w) - B(v)||
  double rhs = 0.0;  // sigma ||w - v||
  bool accepted() const { return lhs <= rhs; }
};

ArmijoTrial armijo_trial(const Vector& w, const Vector& forward_w, double step_size, double ratio,
                         const InclusionProblem& problem);

/// Smallest j >= first_exponent with
///   lambda ||B(w) - B(v)|| <= sigma ||w - v||,  v = J(w - lambda B(w), lambda).
/// Throws Error(BacktrackExhausted) past max_backtracks and Error(NonFiniteIterate)
/// on any non-finite evaluation.
LineSearchOutcome backtrack(const Vector& w, const InclusionProblem& problem,
                            const LineSearchParams& params, int first_exponent = 0);

/// Same, with B(w) supplied by the caller (not counted as an evaluation here).
LineSearchOutcome backtrack(const Vector& w, Vector forward_w, const InclusionProblem& problem,
                            const LineSearchParams& params, int first_exponent = 0);

}  // namespace mvip
