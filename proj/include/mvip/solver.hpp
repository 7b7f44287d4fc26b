#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mvip/linesearch.hpp"
#include "mvip/operators.hpp"
#include "mvip/trace.hpp"

namespace mvip {

/// E = ((2 - gamma) / gamma) * ((1 - sigma) / (1 + sigma))^4.
double inertia_energy(double gamma, double sigma);

/// Upper bound on the inertial weight: E / (E + max(1, E)).
double inertia_cap(double gamma, double sigma);

enum class InertiaKind { Constant, SqrtDecay, Custom };

/// Inertial weights theta_k, with 0 <= theta_k <= theta_max < 1.
class InertiaSchedule {
 public:
  /// theta_k = 0.
  static InertiaSchedule none();
  /// theta_k = theta; nondecreasing, so it satisfies the monotone-inertia assumption.
  static InertiaSchedule constant(double theta);
  /// theta_k = theta_max * sqrt(k) / (k + 5). Decreases after k = 5.
  static InertiaSchedule sqrt_decay(double theta_max);
  /// User-supplied weights; each value is checked against theta_max when evaluated.
  static InertiaSchedule custom(double theta_max, std::function<double(long)> weights);

  double at(long k) const;
  InertiaKind kind() const { return kind_; }
  double theta_max() const { return theta_max_; }
  /// "theory" for constant schedules, "experiment" for the sqrt(k)/(k+5) schedule.
  std::string describe() const;

 private:
  InertiaSchedule(InertiaKind kind, double theta_max, std::function<double(long)> weights);

  InertiaKind kind_ = InertiaKind::Constant;
  double theta_max_ = 0.0;
  std::function<double(long)> weights_;
};

struct SolverConfig {
  double gamma = 1.9;
  LineSearchParams linesearch;
  InertiaSchedule inertia = InertiaSchedule::none();
  RunControl run;
  /// ||phi|| <= phi_zero_tol * (1 + ||w||) counts as phi = 0.
  double phi_zero_tol = 1e-14;
  /// Start each search at j_{k-1} - 1 instead of 0. Off by default.
  bool warm_start = false;
  /// Bypass the line search with a fixed step (used for method comparisons).
  std::optional<double> fixed_step;

  void validate() const;

  /// s = 1, mu = 0.5, sigma = 0.9, gamma = 1.9, theta_k = theta sqrt(k)/(k+5),
  /// theta = 0.99 * inertia_cap(gamma, sigma).
  static SolverConfig experiment_defaults();
  /// experiment_defaults() with a constant inertia at 0.99 * cap (nondecreasing).
  static SolverConfig theory_defaults();
};

/// Derived constants that appear only in the convergence analysis.
struct AnalysisReport {
  double energy = 0.0;          // E
  double inertia_cap = 0.0;     // E / (E + max(1, E))
  double alpha = 0.0;           // ((1 - sigma) / (1 + sigma))^2
  double delta_lower = 0.0;     // (1 - sigma) / (1 + sigma)^2
  double delta_upper = 0.0;     // 1 / (1 - sigma)
  double lambda_min = kNaN;
  double beta = kNaN;           // strong monotonicity modulus of A, if known
  double tau = kNaN;            // 1 - alpha/2 * min{gamma(2-gamma), 2 gamma lambda_min beta}
  double strong_inertia_cap = kNaN;  // min{E'/(E'+max(1,E')), (1-tau)/tau}, E' = (2-gamma)/gamma alpha^2
};

AnalysisReport analyze(const SolverConfig& cfg, double lambda_min = kNaN,
                       std::optional<double> beta = std::nullopt);

/// One inertial forward-backward contraction iteration from (u_{k-1}, u_k).
StepResult ifb_step(const Vector& u_prev, const Vector& u_curr, long k,
                    const InclusionProblem& problem, const SolverConfig& cfg,
                    int first_exponent = 0);

/// Iterate ifb_step from (u0, u1) with k = 1, 2, ... until the stopping rule,
/// phi = 0, divergence, a line-search failure, or max_iters.
SolveResult solve(const InclusionProblem& problem, const Vector& u0, const Vector& u1,
                  const SolverConfig& cfg);

}  // namespace mvip
