#include "mvip/baselines.hpp"

#include <cmath>

#include "driver.hpp"
#include "mvip/errors.hpp"

namespace mvip {

const char* to_string(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::ForwardBackward: return "FB";
    case BaselineMethod::Tseng: return "Tseng";
    case BaselineMethod::ZhangWang: return "ZW";
    case BaselineMethod::TanCho: return "TC";
    case BaselineMethod::JiaXu: return "JX";
  }
  return "unknown";
}

double StepSchedule::at(long k) const {
  switch (kind) {
    case Kind::Constant: return value;
    case Kind::Ratio: return static_cast<double>(k) / (1.0 + static_cast<double>(k));
    case Kind::Armijo: break;
  }
  throw Error(ErrorKind::InvalidArgument, "step schedule: Armijo steps come from the line search");
}

void BaselineConfig::validate() const {
  using K = StepSchedule::Kind;
  const bool uses_schedule =
      method == BaselineMethod::ForwardBackward || method == BaselineMethod::ZhangWang;
  if (uses_schedule && step.kind == K::Constant && !(step.value > 0.0))
    throw Error(ErrorKind::InvalidArgument, "baseline: constant step must be positive");
  if (method == BaselineMethod::ForwardBackward && step.kind == K::Armijo)
    throw Error(ErrorKind::InvalidArgument, "baseline: FB takes a constant or ratio schedule");
  const bool uses_search = method == BaselineMethod::Tseng || method == BaselineMethod::TanCho ||
                           method == BaselineMethod::JiaXu ||
                           (method == BaselineMethod::ZhangWang && step.kind == K::Armijo);
  if (uses_search) linesearch.validate();
  if ((method == BaselineMethod::ZhangWang || method == BaselineMethod::TanCho) &&
      !(gamma > 0.0 && gamma < 2.0))
    throw Error(ErrorKind::InvalidArgument, "baseline: gamma must lie in (0, 2)");
  if (method == BaselineMethod::TanCho) {
    if (!(tc_mu > 0.0 && tc_mu < 1.0))
      throw Error(ErrorKind::InvalidArgument, "TC: mu must lie in (0, 1)");
    if (!(tc_theta >= 0.0)) throw Error(ErrorKind::InvalidArgument, "TC: theta must be >= 0");
    if (!tc_alpha || !tc_epsilon || !tc_contraction)
      throw Error(ErrorKind::InvalidArgument, "TC: alpha, epsilon and f must be set");
  }
}

std::string BaselineConfig::label() const {
  std::string name = to_string(method);
  if (method == BaselineMethod::ZhangWang || method == BaselineMethod::ForwardBackward) {
    switch (step.kind) {
      case StepSchedule::Kind::Constant: name += "[fixed]"; break;
      case StepSchedule::Kind::Ratio: name += "[k/(k+1)]"; break;
      case StepSchedule::Kind::Armijo: name += "[armijo]"; break;
    }
  }
  if (method == BaselineMethod::TanCho && tc_variant == TanChoVariant::Literal) name += "[literal]";
  return name;
}

BaselineConfig BaselineConfig::forward_backward(double lambda) {
  BaselineConfig cfg;
  cfg.method = BaselineMethod::ForwardBackward;
  cfg.step = StepSchedule::constant(lambda);
  return cfg;
}

BaselineConfig BaselineConfig::tseng() {
  BaselineConfig cfg;
  cfg.method = BaselineMethod::Tseng;
  cfg.linesearch = {1.0, 0.5, 0.9, 60};
  return cfg;
}

BaselineConfig BaselineConfig::zhang_wang() {
  BaselineConfig cfg;
  cfg.method = BaselineMethod::ZhangWang;
  cfg.step = StepSchedule::ratio();
  cfg.gamma = 1.9;
  return cfg;
}

BaselineConfig BaselineConfig::zhang_wang_armijo() {
  BaselineConfig cfg = zhang_wang();
  cfg.step = StepSchedule::armijo();
  cfg.linesearch = {1.0, 0.5, 0.9, 60};
  return cfg;
}

BaselineConfig BaselineConfig::tan_cho() {
  BaselineConfig cfg;
  cfg.method = BaselineMethod::TanCho;
  cfg.linesearch = {2.0, 0.5, 0.5, 60};
  cfg.gamma = 1.0;
  cfg.tc_mu = 0.5;
  cfg.tc_theta = 0.5;
  return cfg;
}

BaselineConfig BaselineConfig::jia_xu() {
  BaselineConfig cfg;
  cfg.method = BaselineMethod::JiaXu;
  cfg.linesearch = {1.0, 0.5, 0.9, 60};
  return cfg;
}

Vector fb_step(const Vector& u, double lambda, const InclusionProblem& problem) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "fb_step: lambda must be positive");
  problem.space.require_member(u, "fb_step input");
  Vector next = problem.resolvent(u - lambda * problem.forward(u), lambda);
  if (!next.allFinite()) throw Error(ErrorKind::NonFiniteIterate, "fb_step: non-finite iterate");
  return next;
}

StepResult tseng_step(const Vector& u, const InclusionProblem& problem,
                      const LineSearchParams& linesearch) {
  LineSearchOutcome ls = backtrack(u, problem, linesearch);
  StepResult out;
  out.extrapolated = u;
  out.step_size = ls.step_size;
  out.backtracks = ls.backtracks;
  out.forward_evals = ls.forward_evals;
  out.resolvent_evals = ls.resolvent_evals;
  out.w_minus_v = problem.space.norm(u - ls.v);
  out.next = ls.v - ls.step_size * (ls.forward_v - ls.forward_w);
  return out;
}

StepResult zw_step(const Vector& u, const InclusionProblem& problem, double lambda, double gamma,
                   double phi_zero_tol) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "zw_step: lambda must be positive");
  problem.space.require_member(u, "zw_step input");
  StepResult out;
  out.extrapolated = u;
  const Vector forward_u = problem.forward(u);
  const Vector v = problem.resolvent(u - lambda * forward_u, lambda);
  const Vector forward_v = problem.forward(v);
  if (!forward_u.allFinite() || !v.allFinite() || !forward_v.allFinite())
    throw Error(ErrorKind::NonFiniteIterate, "zw_step: non-finite evaluation");
  out.step_size = lambda;
  out.forward_evals = 2;
  out.resolvent_evals = 1;
  detail::contraction_update(u, v, forward_u, forward_v, lambda, gamma, phi_zero_tol, problem.space,
                             out);
  if (out.phi_zero) out.next = u;
  return out;
}

StepResult zw_step_armijo(const Vector& u, const InclusionProblem& problem,
                          const LineSearchParams& linesearch, double gamma, double phi_zero_tol) {
  LineSearchOutcome ls = backtrack(u, problem, linesearch);
  StepResult out;
  out.extrapolated = u;
  out.step_size = ls.step_size;
  out.backtracks = ls.backtracks;
  out.forward_evals = ls.forward_evals;
  out.resolvent_evals = ls.resolvent_evals;
  detail::contraction_update(u, ls.v, ls.forward_w, ls.forward_v, ls.step_size, gamma,
                             phi_zero_tol, problem.space, out);
  if (out.phi_zero) out.next = u;
  return out;
}

StepResult tc_step(const Vector& u_prev, const Vector& u_curr, long k,
                   const InclusionProblem& problem, const BaselineConfig& cfg) {
  const auto& space = problem.space;
  space.require_member(u_prev, "u_{k-1}");
  space.require_member(u_curr, "u_k");

  StepResult out;
  const double gap = space.norm(u_curr - u_prev);
  out.theta = gap > 0.0 ? std::min(cfg.tc_epsilon(k) / gap, cfg.tc_theta) : cfg.tc_theta;
  out.extrapolated = u_curr + out.theta * (u_curr - u_prev);
  const Vector& w = out.extrapolated;

  const bool literal = cfg.tc_variant == TanChoVariant::Literal;
  const Vector& anchor = literal ? u_curr : w;
  LineSearchOutcome ls = backtrack(anchor, problem, cfg.linesearch);
  out.step_size = ls.step_size;
  out.backtracks = ls.backtracks;
  out.forward_evals = ls.forward_evals;
  out.resolvent_evals = ls.resolvent_evals;

  Vector forward_w;
  if (literal) {
    forward_w = problem.forward(w);
    out.forward_evals += 1;
    if (!forward_w.allFinite()) throw Error(ErrorKind::NonFiniteIterate, "tc_step: non-finite B(w)");
  } else {
    forward_w = ls.forward_w;
  }

  const Vector& v = ls.v;
  const Vector phi_w = detail::contraction_direction(w, v, forward_w, ls.forward_v, ls.step_size);
  const double phi_sq = space.squared_norm(phi_w);
  out.w_minus_v = space.norm(w - v);
  out.phi_norm = std::sqrt(phi_sq);
  if (out.phi_norm <= cfg.phi_zero_tol * (1.0 + space.norm(w))) {
    out.phi_zero = true;
    out.next = v;
    return out;
  }
  out.delta = (1.0 - cfg.tc_mu) * out.w_minus_v * out.w_minus_v / phi_sq;

  const Vector direction =
      literal ? detail::contraction_direction(u_curr, v, ls.forward_w, ls.forward_v, ls.step_size)
              : phi_w;
  const Vector z = w - (cfg.gamma * out.delta) * direction;
  const double alpha = cfg.tc_alpha(k);
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorKind::InvalidArgument, "TC: alpha_k must lie in (0, 1)");
  out.next = alpha * cfg.tc_contraction(u_curr) + (1.0 - alpha) * z;
  return out;
}

StepResult jx_step(const Vector& u, const InclusionProblem& problem,
                   const LineSearchParams& linesearch, double phi_zero_tol) {
  LineSearchOutcome ls = backtrack(u, problem, linesearch);
  StepResult out;
  out.extrapolated = u;
  out.step_size = ls.step_size;
  out.backtracks = ls.backtracks;
  out.forward_evals = ls.forward_evals;
  out.resolvent_evals = ls.resolvent_evals;
  detail::contraction_update(u, ls.v, ls.forward_w, ls.forward_v, ls.step_size, 1.0, phi_zero_tol,
                             problem.space, out);
  if (out.phi_zero) out.next = std::move(ls.v);
  return out;
}

SolveResult solve_baseline(const InclusionProblem& problem, const Vector& u0, const Vector& u1,
                           const BaselineConfig& cfg, const RunControl& control) {
  cfg.validate();
  detail::InvariantPolicy policy;
  detail::Stepper step;
  const auto& space = problem.space;

  switch (cfg.method) {
    case BaselineMethod::ForwardBackward:
      step = [&](const Vector&, const Vector& curr, long k) {
        StepResult s;
        s.extrapolated = curr;
        s.step_size = cfg.step.at(k);
        s.next = fb_step(curr, s.step_size, problem);
        s.w_minus_v = space.norm(curr - s.next);
        s.forward_evals = 1;
        s.resolvent_evals = 1;
        return s;
      };
      break;
    case BaselineMethod::Tseng:
      step = [&](const Vector&, const Vector& curr, long) {
        return tseng_step(curr, problem, cfg.linesearch);
      };
      break;
    case BaselineMethod::ZhangWang:
      policy.fejer_gamma = cfg.gamma;
      if (cfg.step.kind == StepSchedule::Kind::Armijo) {
        policy.sigma = cfg.linesearch.ratio;
        policy.delta_bound = true;
        policy.phi_sandwich = true;
        step = [&](const Vector&, const Vector& curr, long) {
          return zw_step_armijo(curr, problem, cfg.linesearch, cfg.gamma, cfg.phi_zero_tol);
        };
      } else {
        step = [&](const Vector&, const Vector& curr, long k) {
          return zw_step(curr, problem, cfg.step.at(k), cfg.gamma, cfg.phi_zero_tol);
        };
      }
      break;
    case BaselineMethod::TanCho:
      if (cfg.tc_variant == TanChoVariant::Consistent) {
        policy.sigma = cfg.linesearch.ratio;
        policy.phi_sandwich = true;
      }
      step = [&](const Vector& prev, const Vector& curr, long k) {
        return tc_step(prev, curr, k, problem, cfg);
      };
      break;
    case BaselineMethod::JiaXu:
      policy.sigma = cfg.linesearch.ratio;
      policy.delta_bound = true;
      policy.phi_sandwich = true;
      policy.fejer_gamma = 1.0;
      step = [&](const Vector&, const Vector& curr, long) {
        return jx_step(curr, problem, cfg.linesearch, cfg.phi_zero_tol);
      };
      break;
  }
  return detail::run_iterations(problem, u0, u1, control, policy, cfg.label(), step);
}

}  // namespace mvip
