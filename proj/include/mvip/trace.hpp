#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvip/space.hpp"

namespace mvip {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class TerminalStatus { Converged, PhiZero, IterCap, Diverged, BacktrackExhausted };

const char* to_string(TerminalStatus status);

enum class StopKind { SuccessiveDiff, DistanceToReference, MeanSquaredError, Residual, IterCapOnly };

const char* to_string(StopKind kind);

/// When to declare convergence. The error metric E_k depends on `kind`:
///   SuccessiveDiff       ||u_{k+1} - u_k||
///   DistanceToReference  ||u_{k+1} - reference||^2
///   MeanSquaredError     ||u_{k+1} - reference||^2 / dimension
///   Residual             ||w_k - v_k||
///   IterCapOnly          ||u_{k+1} - u_k|| (recorded, never stops)
struct StoppingRule {
  StopKind kind = StopKind::SuccessiveDiff;
  double tol = 1e-12;
  std::optional<Vector> reference;

  static StoppingRule successive_diff(double tol) { return {StopKind::SuccessiveDiff, tol, {}}; }
  static StoppingRule distance_to(Vector reference, double tol) {
    return {StopKind::DistanceToReference, tol, std::move(reference)};
  }
  static StoppingRule mean_squared_error(Vector reference, double tol) {
    return {StopKind::MeanSquaredError, tol, std::move(reference)};
  }
  static StoppingRule residual(double tol) { return {StopKind::Residual, tol, {}}; }
  static StoppingRule iter_cap_only() { return {StopKind::IterCapOnly, 1.0, {}}; }

  void validate() const;
};

/// Loop controls shared by every method.
struct RunControl {
  StoppingRule stop;
  long max_iters = 1000;
  bool check_invariants = false;
  /// A known point of (A+B)^{-1}(0); enables the Fejer check.
  std::optional<Vector> known_solution;
  double divergence_threshold = 1e150;

  void validate() const;
};

/// Raw outcome of one iteration of any method.
struct StepResult {
  Vector next;  // u_{k+1}; the accepted solution when phi_zero is set
  bool phi_zero = false;
  Vector extrapolated;  // w_k
  double theta = 0.0;
  double step_size = kNaN;
  int backtracks = 0;
  double delta = kNaN;  // contraction scalar, when the method has one
  double w_minus_v = kNaN;
  double phi_norm = kNaN;
  double w_minus_v_dot_phi = kNaN;
  long forward_evals = 0;
  long resolvent_evals = 0;
};

struct IterationRecord {
  long k = 0;
  double theta = 0.0;
  double step_size = kNaN;
  int backtracks = 0;
  double delta = kNaN;
  double w_minus_v = kNaN;
  double phi_norm = kNaN;
  double step_norm = kNaN;  // ||u_{k+1} - u_k||
  double error = kNaN;      // E_k under the run's stopping rule
  double reference_error = kNaN;  // ||u_{k+1} - reference||^2 when a reference exists
  std::int64_t wall_ns = 0;
  long forward_evals = 0;
  long resolvent_evals = 0;
};

struct InvariantTally {
  long delta_bound = 0;
  long phi_sandwich = 0;
  long fejer = 0;
  long checked_iterations = 0;

  long total() const { return delta_bound + phi_sandwich + fejer; }
};

struct IterationTrace {
  std::string method;
  std::vector<IterationRecord> records;
  TerminalStatus status = TerminalStatus::IterCap;
  std::string detail;
  InvariantTally violations;

  long iterations() const { return static_cast<long>(records.size()); }
  double elapsed_seconds() const;
  long forward_evals() const;
  long resolvent_evals() const;
  /// Smallest recorded step size; NaN if the method records none.
  double min_step_size() const;
  /// Observed [min, max] of the contraction scalar; NaNs if none recorded.
  std::pair<double, double> delta_range() const;
};

struct SolveResult {
  Vector solution;
  IterationTrace trace;
};

/// Least-squares slope of log(min_{j<=k} r_j) against log(k) over the trailing
/// half of the series. Throws Error(InsufficientTrace) for fewer than 50 points
/// or non-positive residuals in the fitted window.
double rate_estimate(std::span<const double> k, std::span<const double> residual);

/// rate_estimate over the ||w_k - v_k|| column of a trace.
double rate_estimate(const IterationTrace& trace);

}  // namespace mvip
