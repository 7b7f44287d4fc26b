#include "mvip/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "driver.hpp"
#include "mvip/errors.hpp"

namespace mvip {

double inertia_energy(double gamma, double sigma) {
  const double r = (1.0 - sigma) / (1.0 + sigma);
  return ((2.0 - gamma) / gamma) * (r * r * r * r);
}

double inertia_cap(double gamma, double sigma) {
  const double e = inertia_energy(gamma, sigma);
  return e / (e + std::max(1.0, e));
}

InertiaSchedule::InertiaSchedule(InertiaKind kind, double theta_max,
                                 std::function<double(long)> weights)
    : kind_(kind), theta_max_(theta_max), weights_(std::move(weights)) {
  if (!(theta_max >= 0.0 && theta_max < 1.0))
    throw Error(ErrorKind::InvalidArgument, "inertia: theta_max must lie in [0, 1)");
}

InertiaSchedule InertiaSchedule::none() { return constant(0.0); }

InertiaSchedule InertiaSchedule::constant(double theta) {
  return InertiaSchedule(InertiaKind::Constant, theta, [theta](long) { return theta; });
}

InertiaSchedule InertiaSchedule::sqrt_decay(double theta_max) {
  return InertiaSchedule(InertiaKind::SqrtDecay, theta_max, [theta_max](long k) {
    const double kk = static_cast<double>(k);
    return theta_max * std::sqrt(kk) / (kk + 5.0);
  });
}

InertiaSchedule InertiaSchedule::custom(double theta_max, std::function<double(long)> weights) {
  if (!weights) throw Error(ErrorKind::InvalidArgument, "inertia: custom schedule is empty");
  return InertiaSchedule(InertiaKind::Custom, theta_max, std::move(weights));
}

double InertiaSchedule::at(long k) const {
  const double theta = weights_(k);
  if (!(theta >= 0.0 && theta <= theta_max_))
    throw Error(ErrorKind::InvalidArgument,
                "inertia: theta_" + std::to_string(k) + " outside [0, theta_max]");
  return theta;
}

std::string InertiaSchedule::describe() const {
  switch (kind_) {
    case InertiaKind::Constant: return "theory";
    case InertiaKind::SqrtDecay: return "experiment";
    case InertiaKind::Custom: return "custom";
  }
  return "custom";
}

void SolverConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 2.0))
    throw Error(ErrorKind::InvalidArgument, "solver: gamma must lie in (0, 2)");
  linesearch.validate();
  run.validate();
  if (!(phi_zero_tol >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "solver: phi_zero_tol must be nonnegative");
  if (fixed_step && !(*fixed_step > 0.0))
    throw Error(ErrorKind::InvalidArgument, "solver: fixed step must be positive");
}

SolverConfig SolverConfig::experiment_defaults() {
  SolverConfig cfg;
  cfg.gamma = 1.9;
  cfg.linesearch = {1.0, 0.5, 0.9, 60};
  cfg.inertia = InertiaSchedule::sqrt_decay(0.99 * inertia_cap(cfg.gamma, cfg.linesearch.ratio));
  return cfg;
}

SolverConfig SolverConfig::theory_defaults() {
  SolverConfig cfg = experiment_defaults();
  cfg.inertia = InertiaSchedule::constant(0.99 * inertia_cap(cfg.gamma, cfg.linesearch.ratio));
  return cfg;
}

AnalysisReport analyze(const SolverConfig& cfg, double lambda_min, std::optional<double> beta) {
  const double gamma = cfg.gamma;
  const double sigma = cfg.linesearch.ratio;
  AnalysisReport r;
  r.energy = inertia_energy(gamma, sigma);
  r.inertia_cap = inertia_cap(gamma, sigma);
  const double ratio = (1.0 - sigma) / (1.0 + sigma);
  r.alpha = ratio * ratio;
  r.delta_lower = (1.0 - sigma) / ((1.0 + sigma) * (1.0 + sigma));
  r.delta_upper = 1.0 / (1.0 - sigma);
  r.lambda_min = lambda_min;
  if (beta && !std::isnan(lambda_min)) {
    r.beta = *beta;
    r.tau = 1.0 - 0.5 * r.alpha * std::min(gamma * (2.0 - gamma), 2.0 * gamma * lambda_min * *beta);
    const double e2 = ((2.0 - gamma) / gamma) * r.alpha * r.alpha;
    r.strong_inertia_cap = std::min(e2 / (e2 + std::max(1.0, e2)), (1.0 - r.tau) / r.tau);
  }
  return r;
}

StepResult ifb_step(const Vector& u_prev, const Vector& u_curr, long k,
                    const InclusionProblem& problem, const SolverConfig& cfg, int first_exponent) {
  problem.space.require_member(u_prev, "u_{k-1}");
  problem.space.require_member(u_curr, "u_k");

  StepResult out;
  out.theta = cfg.inertia.at(k);
  // theta = 0 copies u_k so that signed zeros survive.
  out.extrapolated = out.theta == 0.0 ? u_curr : Vector(u_curr + out.theta * (u_curr - u_prev));
  const Vector& w = out.extrapolated;

  Vector v, forward_w, forward_v;
  if (cfg.fixed_step) {
    const double step = *cfg.fixed_step;
    forward_w = problem.forward(w);
    v = problem.resolvent(w - step * forward_w, step);
    forward_v = problem.forward(v);
    if (!forward_w.allFinite() || !v.allFinite() || !forward_v.allFinite())
      throw Error(ErrorKind::NonFiniteIterate, "ifb_step: non-finite evaluation");
    out.step_size = step;
    out.backtracks = 0;
    out.forward_evals = 2;
    out.resolvent_evals = 1;
  } else {
    LineSearchOutcome ls = backtrack(w, problem, cfg.linesearch, first_exponent);
    out.step_size = ls.step_size;
    out.backtracks = ls.backtracks;
    out.forward_evals = ls.forward_evals;
    out.resolvent_evals = ls.resolvent_evals;
    v = std::move(ls.v);
    forward_w = std::move(ls.forward_w);
    forward_v = std::move(ls.forward_v);
  }

  detail::contraction_update(w, v, forward_w, forward_v, out.step_size, cfg.gamma,
                             cfg.phi_zero_tol, problem.space, out);
  if (out.phi_zero) out.next = std::move(v);
  return out;
}

SolveResult solve(const InclusionProblem& problem, const Vector& u0, const Vector& u1,
                  const SolverConfig& cfg) {
  cfg.validate();
  detail::InvariantPolicy policy;
  if (!cfg.fixed_step) {
    policy.sigma = cfg.linesearch.ratio;
    policy.delta_bound = true;
    policy.phi_sandwich = true;
  }
  policy.fejer_gamma = cfg.gamma;

  int last_exponent = 0;
  auto step = [&](const Vector& prev, const Vector& curr, long k) {
    const int first = cfg.warm_start ? std::max(0, last_exponent - 1) : 0;
    StepResult s = ifb_step(prev, curr, k, problem, cfg, first);
    last_exponent = s.backtracks;
    return s;
  };
  std::string label = "IFB[" + cfg.inertia.describe() + (cfg.warm_start ? ",warm-start" : "") + "]";
  return detail::run_iterations(problem, u0, u1, cfg.run, policy, std::move(label), step);
}

}  // namespace mvip
