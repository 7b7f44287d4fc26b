#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "mvip/errors.hpp"
#include "mvip/problems.hpp"
#include "mvip/solver.hpp"
#include "oracles.hpp"

using namespace mvip;

namespace {

InclusionProblem make(ForwardOperator B, ResolventOperator J, Index d) {
  return {std::move(B), std::move(J), InnerProductSpace::euclidean(d)};
}

SolverConfig plain(double gamma = 1.0) {
  SolverConfig cfg;
  cfg.gamma = gamma;
  cfg.linesearch = {1.0, 0.5, 0.9, 60};
  cfg.inertia = InertiaSchedule::none();
  return cfg;
}

Vector scalar(double x) { return Vector::Constant(1, x); }

template <class F>
ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an mvip::Error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("one step on the l1 prox with B = 0") {
  const auto P = make(make_zero_operator(), make_l1_resolvent(1.0), 1);
  const StepResult s = ifb_step(scalar(3), scalar(3), 1, P, plain());
  CHECK(s.extrapolated[0] == 3.0);
  CHECK(s.step_size == 1.0);
  CHECK(s.phi_norm == 1.0);
  CHECK(s.delta == 1.0);
  CHECK(s.next[0] == 2.0);
  CHECK_FALSE(s.phi_zero);
}

TEST_CASE("one step on the linear case A = 0, B = I") {
  const auto P = make(make_linear_operator(Matrix::Identity(1, 1), Vector::Zero(1)),
                      make_identity_resolvent(), 1);
  const StepResult s = ifb_step(scalar(1), scalar(1), 1, P, plain());
  CHECK(s.step_size == 0.5);
  CHECK(s.phi_norm == 0.25);
  CHECK(s.delta == 2.0);
  CHECK(s.next[0] == 0.5);
  const AnalysisReport r = analyze(plain());
  CHECK(r.delta_lower == doctest::Approx(0.1 / 3.61));
  CHECK(r.delta_upper == doctest::Approx(10.0));
  CHECK(s.delta >= r.delta_lower);
  CHECK(s.delta <= r.delta_upper);
}

TEST_CASE("a true zero returns PhiZero with u unchanged") {
  const auto P = make(make_cubic_operator(), make_l1_resolvent(1.0), 2);
  const StepResult s = ifb_step(Vector::Zero(2), Vector::Zero(2), 1, P, plain());
  CHECK(s.phi_zero);
  CHECK(s.next == Vector::Zero(2));

  SolverConfig cfg = plain();
  const SolveResult r = solve(P, Vector::Zero(2), Vector::Zero(2), cfg);
  CHECK(r.trace.status == TerminalStatus::PhiZero);
  CHECK(r.trace.iterations() == 1);
}

TEST_CASE("with A = 0 and B = 0 every point solves the problem") {
  const auto P = make(make_zero_operator(), make_identity_resolvent(), 3);
  Vector u0(3), u1(3);
  u0 << 5, 5, 5;
  u1 << 1, -2, 0.5;
  const SolveResult r = solve(P, u0, u1, plain());
  CHECK(r.trace.status == TerminalStatus::PhiZero);
  CHECK(r.trace.iterations() == 1);
  CHECK(r.solution == u1);
}

TEST_CASE("cubic forward map with the l1 prox converges to zero") {
  const auto P = make(make_cubic_operator(), make_l1_resolvent(1.0), 2);
  Vector u(2);
  u << 2, -2;
  for (SolverConfig cfg : {plain(), SolverConfig::experiment_defaults(), SolverConfig::theory_defaults()}) {
    cfg.run.stop = StoppingRule::successive_diff(1e-14);
    cfg.run.max_iters = 500;
    cfg.run.check_invariants = true;
    cfg.run.known_solution = Vector::Zero(2);
    const SolveResult r = solve(P, u, u, cfg);
    CHECK(r.solution.norm() <= 1e-6);
    CHECK(r.trace.iterations() <= 500);
    CHECK(r.trace.violations.total() == 0);
    CHECK(r.trace.violations.checked_iterations > 0);
  }
}

TEST_CASE("inertia cap at the default parameters") {
  const double E = inertia_energy(1.9, 0.9);
  CHECK(E == doctest::Approx((0.1 / 1.9) * std::pow(0.1 / 1.9, 4)).epsilon(1e-12));
  CHECK(E == doctest::Approx(4.04e-7).epsilon(2e-3));
  CHECK(inertia_cap(1.9, 0.9) == doctest::Approx(E / (E + 1.0)).epsilon(1e-15));
  // Large energies use E / 2E.
  CHECK(inertia_cap(0.001, 0.0001) == doctest::Approx(0.5));

  const SolverConfig cfg = SolverConfig::experiment_defaults();
  CHECK(cfg.inertia.kind() == InertiaKind::SqrtDecay);
  CHECK(cfg.inertia.describe() == "experiment");
  const double th = cfg.inertia.theta_max();
  CHECK(th == doctest::Approx(0.99 * inertia_cap(1.9, 0.9)));
  CHECK(cfg.inertia.at(4) == doctest::Approx(th * 2.0 / 9.0));
  CHECK(SolverConfig::theory_defaults().inertia.describe() == "theory");
  CHECK(SolverConfig::theory_defaults().inertia.at(1000) == th);
}

TEST_CASE("inertia schedule and config validation") {
  CHECK(error_kind_of([] { InertiaSchedule::constant(1.0); }) == ErrorKind::InvalidArgument);
  CHECK(error_kind_of([] { InertiaSchedule::sqrt_decay(-0.1); }) == ErrorKind::InvalidArgument);
  const auto custom = InertiaSchedule::custom(0.3, [](long k) { return k < 3 ? 0.1 : 0.5; });
  CHECK(custom.at(1) == 0.1);
  CHECK(error_kind_of([&] { custom.at(3); }) == ErrorKind::InvalidArgument);

  SolverConfig cfg = plain();
  cfg.gamma = 2.0;
  CHECK(error_kind_of([&] { cfg.validate(); }) == ErrorKind::InvalidArgument);
  cfg = plain();
  cfg.run.stop = {StopKind::DistanceToReference, 1e-3, std::nullopt};
  CHECK(error_kind_of([&] { cfg.validate(); }) == ErrorKind::InvalidArgument);
  cfg = plain();
  cfg.run.max_iters = 0;
  CHECK(error_kind_of([&] { cfg.validate(); }) == ErrorKind::InvalidArgument);
  cfg = plain();
  cfg.fixed_step = -1.0;
  CHECK(error_kind_of([&] { cfg.validate(); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("strong-monotonicity analysis constants") {
  const AnalysisReport r = analyze(SolverConfig::experiment_defaults(), 0.25, 0.5);
  const double alpha = std::pow(0.1 / 1.9, 2);
  CHECK(r.alpha == doctest::Approx(alpha));
  CHECK(r.tau == doctest::Approx(1.0 - 0.5 * alpha * std::min(1.9 * 0.1, 2 * 1.9 * 0.25 * 0.5)));
  CHECK(r.strong_inertia_cap > 0.0);
  CHECK(r.strong_inertia_cap < 1.0);
  CHECK(std::isnan(analyze(plain()).tau));
}

TEST_CASE("backward-step reduction with B = 0, gamma = 1, no inertia") {
  std::mt19937_64 rng(31);
  const auto P = make(make_zero_operator(), make_l1_resolvent(0.4), 6);
  for (int t = 0; t < 20; ++t) {
    const Vector u = oracle::random_vector(rng, 6);
    const StepResult s = ifb_step(u, u, 1, P, plain());
    const Vector expected = soft_threshold(u, s.step_size * 0.4);
    if (s.phi_zero) {
      CHECK(s.next == expected);
    } else {
      CHECK((s.next - expected).cwiseAbs().maxCoeff() <= 1e-15);
    }
  }
}

TEST_CASE("fixed points satisfy first-order optimality") {
  const auto inst = gen_cs({32, 16, 3, 40.0, std::nullopt, 4});
  const auto ap = assemble(inst);
  SolverConfig cfg = SolverConfig::experiment_defaults();
  cfg.run.stop = StoppingRule::residual(1e-11);
  cfg.run.max_iters = 20000;
  const SolveResult r = solve(ap.problem, Vector::Zero(32), Vector::Zero(32), cfg);
  REQUIRE(r.trace.status != TerminalStatus::Diverged);
  const double lambda = 0.5;
  const Vector u = r.solution;
  const Vector Bu = quartic_fidelity_gradient(inst.sensing, inst.observed, u);
  const double res = (u - soft_threshold(u - lambda * Bu, lambda * inst.rho)).norm();
  REQUIRE(res <= 1e-10);
  for (Index i = 0; i < 32; ++i) {
    CAPTURE(i);
    // Coordinates within the residual tolerance of zero count as zero.
    if (std::abs(u[i]) > 1e-9) {
      CHECK(std::abs(Bu[i] + inst.rho * (u[i] > 0 ? 1.0 : -1.0)) <= 1e-8);
    } else {
      CHECK(std::abs(Bu[i]) <= inst.rho + 1e-8);
    }
  }
}

TEST_CASE("compressed sensing runs keep every invariant and are deterministic") {
  const auto inst = gen_cs({128, 64, 4, 40.0, std::nullopt, 2});
  const auto ap = assemble(inst);
  SolverConfig cfg = SolverConfig::experiment_defaults();
  cfg.run.stop = StoppingRule::iter_cap_only();
  cfg.run.max_iters = 150;
  cfg.run.check_invariants = true;
  const Vector u0 = Vector::Zero(128);
  const SolveResult a = solve(ap.problem, u0, u0, cfg);
  const SolveResult b = solve(ap.problem, u0, u0, cfg);
  CHECK(a.trace.violations.total() == 0);
  CHECK(a.trace.min_step_size() > 0.0);
  const auto [dmin, dmax] = a.trace.delta_range();
  CHECK(dmin >= (0.1 / 3.61) * (1 - 1e-12));
  CHECK(dmax <= 10.0 * (1 + 1e-12));
  CHECK(a.solution == b.solution);
  REQUIRE(a.trace.iterations() == b.trace.iterations());
  for (long k = 0; k < a.trace.iterations(); ++k) {
    CHECK(a.trace.records[k].step_size == b.trace.records[k].step_size);
    CHECK(a.trace.records[k].delta == b.trace.records[k].delta);
  }
  long fe = 0, re = 0;
  for (const auto& rec : a.trace.records) {
    fe += rec.forward_evals;
    re += rec.resolvent_evals;
    CHECK(rec.forward_evals == rec.resolvent_evals + 1);
    CHECK(rec.resolvent_evals == rec.backtracks + 1);
  }
  CHECK(a.trace.forward_evals() == fe);
  CHECK(a.trace.resolvent_evals() == re);
  CHECK(a.trace.method == "IFB[experiment]");
}

TEST_CASE("warm start reuses the previous exponent") {
  const auto inst = gen_cs({64, 32, 3, 40.0, std::nullopt, 5});
  const auto ap = assemble(inst);
  SolverConfig cfg = SolverConfig::experiment_defaults();
  cfg.run.stop = StoppingRule::iter_cap_only();
  cfg.run.max_iters = 100;
  cfg.run.check_invariants = true;
  const SolveResult cold = solve(ap.problem, Vector::Zero(64), Vector::Zero(64), cfg);
  cfg.warm_start = true;
  const SolveResult warm = solve(ap.problem, Vector::Zero(64), Vector::Zero(64), cfg);
  CHECK(warm.trace.method == "IFB[experiment,warm-start]");
  CHECK(warm.trace.violations.total() == 0);
  CHECK(warm.trace.resolvent_evals() <= cold.trace.resolvent_evals());
}

TEST_CASE("stopping rules and terminal statuses") {
  const auto P = make(make_cubic_operator(), make_l1_resolvent(1.0), 2);
  const Vector u = Vector::Constant(2, 2.0);
  SolverConfig cfg = plain();

  cfg.run.stop = StoppingRule::distance_to(Vector::Zero(2), 1e-8);
  SolveResult r = solve(P, u, u, cfg);
  CHECK(r.trace.status == TerminalStatus::Converged);
  CHECK(r.trace.records.back().error <= 1e-8);
  CHECK(r.trace.records.back().error == r.trace.records.back().reference_error);

  cfg.run.stop = StoppingRule::mean_squared_error(Vector::Zero(2), 1e-8);
  r = solve(P, u, u, cfg);
  CHECK(r.trace.records.back().error == doctest::Approx(r.trace.records.back().reference_error / 2));

  cfg.run.stop = StoppingRule::iter_cap_only();
  cfg.run.max_iters = 2;
  r = solve(P, u, u, cfg);
  CHECK(r.trace.status == TerminalStatus::IterCap);
  CHECK(r.trace.iterations() == 2);

  cfg.run.max_iters = 50;
  cfg.run.divergence_threshold = 0.5;
  r = solve(P, u, u, cfg);
  CHECK(r.trace.status == TerminalStatus::Diverged);
  CHECK(r.solution.allFinite());

  const auto steep = make(make_linear_operator(10.0 * Matrix::Identity(1, 1), Vector::Zero(1)),
                          make_identity_resolvent(), 1);
  SolverConfig tight = plain();
  tight.linesearch.max_backtracks = 1;
  r = solve(steep, scalar(1), scalar(1), tight);
  CHECK(r.trace.status == TerminalStatus::BacktrackExhausted);
  CHECK(r.solution[0] == 1.0);

  ForwardOperator blowup{[](const Vector& x) { return Vector(x.array().exp().exp()); }, "exp-exp", {}};
  r = solve(make(blowup, make_identity_resolvent(), 1), scalar(10), scalar(10), plain());
  CHECK(r.trace.status == TerminalStatus::Diverged);

  CHECK(error_kind_of([&] { solve(P, Vector::Zero(3), Vector::Zero(3), plain()); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("fixed step bypasses the line search") {
  const auto P = make(make_linear_operator(Matrix::Identity(1, 1), Vector::Zero(1)),
                      make_identity_resolvent(), 1);
  SolverConfig cfg = plain();
  cfg.fixed_step = 0.25;
  const StepResult s = ifb_step(scalar(1), scalar(1), 1, P, cfg);
  CHECK(s.step_size == 0.25);
  CHECK(s.resolvent_evals == 1);
  CHECK(s.forward_evals == 2);
  // v = 0.75, phi = (1 - lambda)(w - v) = 0.1875, delta = 4/3
  CHECK(s.next[0] == doctest::Approx(1.0 - (4.0 / 3.0) * 0.1875));
}

TEST_CASE("rate estimate") {
  std::vector<double> k, flat, half;
  for (int i = 1; i <= 200; ++i) {
    k.push_back(i);
    flat.push_back(0.3);
    half.push_back(1.0 / std::sqrt(static_cast<double>(i)));
  }
  CHECK(std::abs(rate_estimate(k, flat)) <= 1e-12);
  CHECK(std::abs(rate_estimate(k, half) + 0.5) <= 1e-12);

  // The running minimum removes upward blips.
  std::vector<double> bumpy = half;
  for (std::size_t i = 0; i < bumpy.size(); i += 7) bumpy[i] *= 3.0;
  CHECK(rate_estimate(k, bumpy) <= -0.45);

  std::vector<double> short_k(k.begin(), k.begin() + 49), short_r(half.begin(), half.begin() + 49);
  CHECK(error_kind_of([&] { rate_estimate(short_k, short_r); }) == ErrorKind::InsufficientTrace);
  std::vector<double> zeros(200, 0.0);
  CHECK(error_kind_of([&] { rate_estimate(k, zeros); }) == ErrorKind::InsufficientTrace);
  IterationTrace empty;
  CHECK(error_kind_of([&] { rate_estimate(empty); }) == ErrorKind::InsufficientTrace);
}
