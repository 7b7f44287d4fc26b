#include "mvip/trace.hpp"

#include <algorithm>
#include <cmath>

#include "mvip/errors.hpp"

namespace mvip {

const char* to_string(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::Converged: return "Converged";
    case TerminalStatus::PhiZero: return "PhiZero";
    case TerminalStatus::IterCap: return "IterCap";
    case TerminalStatus::Diverged: return "Diverged";
    case TerminalStatus::BacktrackExhausted: return "BacktrackExhausted";
  }
  return "Unknown";
}

const char* to_string(StopKind kind) {
  switch (kind) {
    case StopKind::SuccessiveDiff: return "successive_diff";
    case StopKind::DistanceToReference: return "distance_to_reference";
    case StopKind::MeanSquaredError: return "mean_squared_error";
    case StopKind::Residual: return "residual";
    case StopKind::IterCapOnly: return "iter_cap_only";
  }
  return "unknown";
}

void StoppingRule::validate() const {
  if (kind != StopKind::IterCapOnly && !(tol > 0.0))
    throw Error(ErrorKind::InvalidArgument, "stopping rule: tolerance must be positive");
  if ((kind == StopKind::DistanceToReference || kind == StopKind::MeanSquaredError) && !reference)
    throw Error(ErrorKind::InvalidArgument, "stopping rule: reference-based rule needs a reference");
}

void RunControl::validate() const {
  stop.validate();
  if (max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be positive");
  if (!(divergence_threshold > 0.0))
    throw Error(ErrorKind::InvalidArgument, "divergence threshold must be positive");
}

double IterationTrace::elapsed_seconds() const {
  std::int64_t ns = 0;
  for (const auto& r : records) ns += r.wall_ns;
  return static_cast<double>(ns) * 1e-9;
}

long IterationTrace::forward_evals() const {
  long n = 0;
  for (const auto& r : records) n += r.forward_evals;
  return n;
}

long IterationTrace::resolvent_evals() const {
  long n = 0;
  for (const auto& r : records) n += r.resolvent_evals;
  return n;
}

double IterationTrace::min_step_size() const {
  double best = kNaN;
  for (const auto& r : records) {
    if (std::isnan(r.step_size)) continue;
    if (std::isnan(best) || r.step_size < best) best = r.step_size;
  }
  return best;
}

std::pair<double, double> IterationTrace::delta_range() const {
  double lo = kNaN, hi = kNaN;
  for (const auto& r : records) {
    if (std::isnan(r.delta)) continue;
    if (std::isnan(lo) || r.delta < lo) lo = r.delta;
    if (std::isnan(hi) || r.delta > hi) hi = r.delta;
  }
  return {lo, hi};
}

double rate_estimate(std::span<const double> k, std::span<const double> residual) {
  if (k.size() != residual.size())
    throw Error(ErrorKind::DimensionMismatch, "rate_estimate: column lengths differ");
  const std::size_t n = k.size();
  if (n < 50)
    throw Error(ErrorKind::InsufficientTrace,
                "rate_estimate: need at least 50 iterations, have " + std::to_string(n));

  std::vector<double> running_min(n);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isnan(residual[i])) m = std::min(m, residual[i]);
    running_min[i] = m;
  }

  const std::size_t first = n - n / 2;
  std::vector<double> xs, ys;
  for (std::size_t i = first; i < n; ++i) {
    if (!(k[i] > 0.0) || !(running_min[i] > 0.0) || !std::isfinite(running_min[i]))
      throw Error(ErrorKind::InsufficientTrace,
                  "rate_estimate: non-positive iteration index or residual in fitted window");
    xs.push_back(std::log(k[i]));
    ys.push_back(std::log(running_min[i]));
  }
  const double count = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0))
    throw Error(ErrorKind::InsufficientTrace, "rate_estimate: degenerate iteration indices");
  return sxy / sxx;
}

double rate_estimate(const IterationTrace& trace) {
  std::vector<double> k, r;
  k.reserve(trace.records.size());
  r.reserve(trace.records.size());
  for (const auto& rec : trace.records) {
    k.push_back(static_cast<double>(rec.k));
    r.push_back(rec.w_minus_v);
  }
  return rate_estimate(k, r);
}

}  // namespace mvip
