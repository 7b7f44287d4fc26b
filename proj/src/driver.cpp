#include "driver.hpp"

#include <chrono>
#include <cmath>

#include "mvip/errors.hpp"

namespace mvip::detail {
namespace {

constexpr double kInvariantSlack = 1e-12;

void check_invariants(const StepResult& s, const Vector& next, const InvariantPolicy& policy,
                      const std::optional<Vector>& solution, const InnerProductSpace& space,
                      InvariantTally& tally) {
  tally.checked_iterations += 1;
  if (policy.sigma) {
    const double sigma = *policy.sigma;
    if (policy.delta_bound && !std::isnan(s.delta)) {
      const double lo = (1.0 - sigma) / ((1.0 + sigma) * (1.0 + sigma));
      const double hi = 1.0 / (1.0 - sigma);
      if (!(s.delta >= lo * (1.0 - kInvariantSlack) && s.delta <= hi * (1.0 + kInvariantSlack)))
        tally.delta_bound += 1;
    }
    if (policy.phi_sandwich && !std::isnan(s.phi_norm)) {
      const double lo = (1.0 - sigma) * s.w_minus_v * (1.0 - kInvariantSlack);
      const double hi = (1.0 + sigma) * s.w_minus_v * (1.0 + kInvariantSlack);
      if (!(s.phi_norm >= lo && s.phi_norm <= hi)) tally.phi_sandwich += 1;
    }
  }
  if (policy.fejer_gamma && solution && !std::isnan(s.delta)) {
    const double gamma = *policy.fejer_gamma;
    const Vector& ref = *solution;
    const double after = space.squared_norm(next - ref);
    const double before = space.squared_norm(s.extrapolated - ref);
    const double gain = gamma * (2.0 - gamma) * s.w_minus_v_dot_phi * s.w_minus_v_dot_phi /
                        (s.phi_norm * s.phi_norm);
    const double slack = 1e-8 * (1.0 + space.squared_norm(ref));
    if (!(after <= before - gain + slack)) tally.fejer += 1;
  }
}

}  // namespace

Vector contraction_direction(const Vector& w, const Vector& v, const Vector& forward_w,
                             const Vector& forward_v, double step_size) {
  return (w - v) - step_size * (forward_w - forward_v);
}

void contraction_update(const Vector& w, const Vector& v, const Vector& forward_w,
                        const Vector& forward_v, double step_size, double gamma,
                        double phi_zero_tol, const InnerProductSpace& space, StepResult& out) {
  const Vector residual = w - v;
  const Vector phi = contraction_direction(w, v, forward_w, forward_v, step_size);
  const double phi_sq = space.squared_norm(phi);
  out.w_minus_v = space.norm(residual);
  out.phi_norm = std::sqrt(phi_sq);
  if (out.phi_norm <= phi_zero_tol * (1.0 + space.norm(w))) {
    out.phi_zero = true;
    out.delta = kNaN;
    return;
  }
  out.w_minus_v_dot_phi = space.dot(residual, phi);
  out.delta = out.w_minus_v_dot_phi / phi_sq;
  out.next = w - (gamma * out.delta) * phi;
}

SolveResult run_iterations(const InclusionProblem& problem, const Vector& u0, const Vector& u1,
                           const RunControl& control, const InvariantPolicy& policy,
                           std::string method, const Stepper& step) {
  control.validate();
  const auto& space = problem.space;
  space.require_member(u0, "u0");
  space.require_member(u1, "u1");
  if (!u0.allFinite() || !u1.allFinite())
    throw Error(ErrorKind::NonFiniteIterate, "initial points must be finite");
  if (control.stop.reference) space.require_member(*control.stop.reference, "stopping reference");
  if (control.known_solution) space.require_member(*control.known_solution, "known solution");

  SolveResult result;
  IterationTrace& trace = result.trace;
  trace.method = std::move(method);
  trace.status = TerminalStatus::IterCap;

  Vector prev = u0;
  Vector curr = u1;
  const auto& stop = control.stop;

  for (long k = 1; k <= control.max_iters; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    StepResult s;
    try {
      s = step(prev, curr, k);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BacktrackExhausted) {
        trace.status = TerminalStatus::BacktrackExhausted;
      } else if (e.kind() == ErrorKind::NonFiniteIterate) {
        trace.status = TerminalStatus::Diverged;
      } else {
        throw;
      }
      trace.detail = e.what();
      break;
    }
    const auto t1 = std::chrono::steady_clock::now();

    IterationRecord rec;
    rec.k = k;
    rec.theta = s.theta;
    rec.step_size = s.step_size;
    rec.backtracks = s.backtracks;
    rec.delta = s.delta;
    rec.w_minus_v = s.w_minus_v;
    rec.phi_norm = s.phi_norm;
    rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    rec.forward_evals = s.forward_evals;
    rec.resolvent_evals = s.resolvent_evals;

    const Vector& next = s.next;
    const bool finite = next.size() == curr.size() && next.allFinite();
    const double next_norm = finite ? space.norm(next) : kNaN;
    if (!finite || next_norm > control.divergence_threshold) {
      trace.records.push_back(rec);
      trace.status = TerminalStatus::Diverged;
      trace.detail = finite ? "iterate norm exceeded divergence threshold" : "non-finite iterate";
      break;
    }

    rec.step_norm = space.norm(next - curr);
    if (stop.reference) rec.reference_error = space.squared_norm(next - *stop.reference);
    switch (stop.kind) {
      case StopKind::SuccessiveDiff:
      case StopKind::IterCapOnly: rec.error = rec.step_norm; break;
      case StopKind::DistanceToReference: rec.error = rec.reference_error; break;
      case StopKind::MeanSquaredError:
        rec.error = rec.reference_error / static_cast<double>(space.dimension());
        break;
      case StopKind::Residual: rec.error = rec.w_minus_v; break;
    }

    if (control.check_invariants && !s.phi_zero)
      check_invariants(s, next, policy, control.known_solution, space, trace.violations);

    trace.records.push_back(rec);
    prev = std::move(curr);
    curr = next;

    if (s.phi_zero) {
      trace.status = TerminalStatus::PhiZero;
      break;
    }
    if (stop.kind != StopKind::IterCapOnly && rec.error <= stop.tol) {
      trace.status = TerminalStatus::Converged;
      break;
    }
  }

  result.solution = std::move(curr);
  return result;
}

}  // namespace mvip::detail
