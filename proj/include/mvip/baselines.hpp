#pragma once

#include <functional>
#include <string>

#include "mvip/linesearch.hpp"
#include "mvip/operators.hpp"
#include "mvip/trace.hpp"

namespace mvip {

enum class BaselineMethod { ForwardBackward, Tseng, ZhangWang, TanCho, JiaXu };

const char* to_string(BaselineMethod method);

/// Step size rule for methods without a built-in line search.
struct StepSchedule {
  enum class Kind { Constant, Ratio, Armijo };  // Ratio: lambda_k = k / (1 + k)
  Kind kind = Kind::Constant;
  double value = 1.0;  // Constant only

  static StepSchedule constant(double lambda) { return {Kind::Constant, lambda}; }
  static StepSchedule ratio() { return {Kind::Ratio, 0.0}; }
  static StepSchedule armijo() { return {Kind::Armijo, 0.0}; }

  /// Throws for Armijo, whose steps come from the line search.
  double at(long k) const;
};

/// v from w and phi(w, v) (default), or the literal reading:
/// v from u_k, eta from phi(w_k, v_k), z along phi(u_k, v_k).
enum class TanChoVariant { Consistent, Literal };

struct BaselineConfig {
  BaselineMethod method = BaselineMethod::ZhangWang;
  StepSchedule step = StepSchedule::ratio();  // FB, ZW
  LineSearchParams linesearch;                // Tseng, TC, JX, Armijo-mode ZW
  double gamma = 1.9;                         // ZW, TC

  // TC only.
  double tc_mu = 0.5;     // eta_k = (1 - mu) ||w - v||^2 / ||phi||^2
  double tc_theta = 0.5;  // inertia ceiling
  std::function<double(long)> tc_alpha = [](long k) { return 1.0 / (static_cast<double>(k) + 1.0); };
  std::function<double(long)> tc_epsilon = [](long k) {
    const double kk = static_cast<double>(k) + 1.0;
    return 100.0 / (kk * kk);
  };
  std::function<Vector(const Vector&)> tc_contraction = [](const Vector& x) -> Vector { return 0.5 * x; };
  TanChoVariant tc_variant = TanChoVariant::Consistent;

  double phi_zero_tol = 1e-14;

  void validate() const;
  std::string label() const;

  static BaselineConfig forward_backward(double lambda);
  static BaselineConfig tseng();
  /// lambda_k = k / (1 + k), gamma = 1.9.
  static BaselineConfig zhang_wang();
  /// Same contraction with the IFB line search (s = 1, mu = 0.5, sigma = 0.9).
  static BaselineConfig zhang_wang_armijo();
  /// delta = 2, l = 0.5, mu = 0.5, gamma = 1, alpha_k = 1/(k+1), f(x) = x/2,
  /// epsilon_k = 100/(k+1)^2, theta = 0.5.
  static BaselineConfig tan_cho();
  static BaselineConfig jia_xu();
};

/// J(u - lambda B(u), lambda).
Vector fb_step(const Vector& u, double lambda, const InclusionProblem& problem);

/// v = J(u - lambda B u) with the Armijo step, then u+ = v - lambda (B v - B u).
StepResult tseng_step(const Vector& u, const InclusionProblem& problem,
                      const LineSearchParams& linesearch);

/// Projection-contraction step at a given lambda; phi = 0 returns u.
StepResult zw_step(const Vector& u, const InclusionProblem& problem, double lambda, double gamma,
                   double phi_zero_tol = 1e-14);

/// The same step with lambda chosen by the Armijo search at u.
StepResult zw_step_armijo(const Vector& u, const InclusionProblem& problem,
                          const LineSearchParams& linesearch, double gamma,
                          double phi_zero_tol = 1e-14);

/// Inertial viscosity-type projection step.
StepResult tc_step(const Vector& u_prev, const Vector& u_curr, long k,
                   const InclusionProblem& problem, const BaselineConfig& cfg);

/// Projection-like step with gamma = 1; the resolvent must be a projection.
StepResult jx_step(const Vector& u, const InclusionProblem& problem,
                   const LineSearchParams& linesearch, double phi_zero_tol = 1e-14);

SolveResult solve_baseline(const InclusionProblem& problem, const Vector& u0, const Vector& u1,
                           const BaselineConfig& cfg, const RunControl& control);

}  // namespace mvip
