#include "mvip/linesearch.hpp"

#include <cmath>
#include <string>

#include "mvip/errors.hpp"

namespace mvip {

void LineSearchParams::validate() const {
  if (!(initial_step > 0.0 && std::isfinite(initial_step)))
    throw Error(ErrorKind::InvalidArgument, "line search: initial step must be positive");
  if (!(shrink > 0.0 && shrink < 1.0))
    throw Error(ErrorKind::InvalidArgument, "line search: shrink factor must lie in (0, 1)");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw Error(ErrorKind::InvalidArgument, "line search: acceptance ratio must lie in (0, 1)");
  if (max_backtracks < 1)
    throw Error(ErrorKind::InvalidArgument, "line search: max_backtracks must be positive");
}

double LineSearchParams::step_at(int j) const { return initial_step * std::pow(shrink, j); }

ArmijoTrial armijo_trial(const Vector& w, const Vector& forward_w, double step_size, double ratio,
                         const InclusionProblem& problem) {
  ArmijoTrial trial;
  trial.v = problem.resolvent(w - step_size * forward_w, step_size);
  if (!trial.v.allFinite())
    throw Error(ErrorKind::NonFiniteIterate, "line search: resolvent returned a non-finite point");
  trial.forward_v = problem.forward(trial.v);
  if (!trial.forward_v.allFinite())
    throw Error(ErrorKind::NonFiniteIterate, "line search: forward operator returned non-finite values");
  trial.lhs = step_size * problem.space.norm(forward_w - trial.forward_v);
  trial.rhs = ratio * problem.space.norm(w - trial.v);
  return trial;
}

LineSearchOutcome backtrack(const Vector& w, const InclusionProblem& problem,
                            const LineSearchParams& params, int first_exponent) {
  if (!w.allFinite())
    throw Error(ErrorKind::NonFiniteIterate, "line search: non-finite base point");
  Vector forward_w = problem.forward(w);
  LineSearchOutcome out = backtrack(w, std::move(forward_w), problem, params, first_exponent);
  out.forward_evals += 1;
  return out;
}

LineSearchOutcome backtrack(const Vector& w, Vector forward_w, const InclusionProblem& problem,
                            const LineSearchParams& params, int first_exponent) {
  params.validate();
  problem.space.require_member(w, "line search base point");
  if (!w.allFinite() || !forward_w.allFinite())
    throw Error(ErrorKind::NonFiniteIterate, "line search: non-finite base point or B(w)");

  LineSearchOutcome out;
  for (int j = std::max(first_exponent, 0); j <= params.max_backtracks; ++j) {
    const double step = params.step_at(j);
    ArmijoTrial trial = armijo_trial(w, forward_w, step, params.ratio, problem);
    out.resolvent_evals += 1;
    out.forward_evals += 1;
    if (trial.accepted()) {
      out.step_size = step;
      out.backtracks = j;
      out.v = std::move(trial.v);
      out.forward_v = std::move(trial.forward_v);
      out.forward_w = std::move(forward_w);
      return out;
    }
  }
  throw Error(ErrorKind::BacktrackExhausted,
              "line search: no acceptable step within " + std::to_string(params.max_backtracks) +
                  " backtracks");
}

}  // namespace mvip
