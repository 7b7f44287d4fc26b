#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mvip/operators.hpp"
#include "mvip/trace.hpp"

namespace mvip::detail {

/// Which runtime checks apply to a method's iterates.
struct InvariantPolicy {
  std::optional<double> sigma;  // Armijo ratio; required for the two checks below
  bool delta_bound = false;
  bool phi_sandwich = false;
  /// Fejer inequality for updates of the form w - gamma delta phi.
  std::optional<double> fejer_gamma;
};

using Stepper = std::function<StepResult(const Vector& prev, const Vector& curr, long k)>;

SolveResult run_iterations(const InclusionProblem& problem, const Vector& u0, const Vector& u1,
                           const RunControl& control, const InvariantPolicy& policy,
                           std::string method, const Stepper& step);

/// (w - v) - lambda (B w - B v).
Vector contraction_direction(const Vector& w, const Vector& v, const Vector& forward_w,
                             const Vector& forward_v, double step_size);

/// Fills delta / norms on `out` and returns w - gamma delta phi, or sets phi_zero.
/// Shared verbatim by every projection-contraction method so they agree bitwise.
void contraction_update(const Vector& w, const Vector& v, const Vector& forward_w,
                        const Vector& forward_v, double step_size, double gamma,
                        double phi_zero_tol, const InnerProductSpace& space, StepResult& out);

}  // namespace mvip::detail
