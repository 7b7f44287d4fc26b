#include "mvip/problems.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "mvip/errors.hpp"
#include "mvip/rng.hpp"

namespace mvip {
namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  StreamRng rng(seed, Stream::Matrix);
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) M(i, j) = rng.normal();
  return M;
}

Vector sparse_spikes(Index d, Index l, std::uint64_t seed) {
  StreamRng pick(seed, Stream::Support);
  StreamRng amp(seed, Stream::Amplitude);
  std::vector<Index> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), Index{0});
  Vector u = Vector::Zero(d);
  for (Index t = 0; t < l; ++t) {
    const auto r = t + static_cast<Index>(pick.below(static_cast<std::uint64_t>(d - t)));
    std::swap(idx[static_cast<std::size_t>(t)], idx[static_cast<std::size_t>(r)]);
    double a = 0.0;
    while (a == 0.0) a = amp.uniform(-2.0, 2.0);
    u[idx[static_cast<std::size_t>(t)]] = a;
  }
  return u;
}

/// Gaussian noise rescaled so that 10 log10(||signal||^2 / ||noise||^2) = snr_db.
Vector scaled_noise(const Vector& signal, double snr_db, std::uint64_t seed) {
  if (std::isinf(snr_db) && snr_db > 0) return Vector::Zero(signal.size());
  StreamRng rng(seed, Stream::Noise);
  Vector raw(signal.size());
  for (Index i = 0; i < raw.size(); ++i) raw[i] = rng.normal();
  const double target = signal.norm() / std::pow(10.0, snr_db / 20.0);
  return raw * (target / raw.norm());
}

void check_shape(Index d, Index m, Index l) {
  if (d < 1 || m < 1 || l < 0 || l > d || m > d)
    throw Error(ErrorKind::InvalidArgument, "instance shape needs 1 <= m <= d and 0 <= l <= d");
}

}  // namespace

CompressedSensingInstance gen_cs(const CsOptions& opts) {
  check_shape(opts.d, opts.m, opts.l);
  if (opts.rho && !(*opts.rho >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "gen_cs: rho must be nonnegative");
  CompressedSensingInstance inst;
  inst.seed = opts.seed;
  inst.snr_db = opts.snr_db;
  inst.sparsity = opts.l;
  inst.sensing = gaussian_matrix(opts.m, opts.d, opts.seed);
  inst.truth = sparse_spikes(opts.d, opts.l, opts.seed);
  const Vector clean = inst.sensing * inst.truth;
  inst.noise = scaled_noise(clean, opts.snr_db, opts.seed);
  inst.observed = clean + inst.noise;
  inst.rho = opts.rho ? *opts.rho
                      : 0.005 * (inst.sensing.transpose() * inst.observed).cwiseAbs().maxCoeff();
  return inst;
}

LpaInstance gen_lpa(const LpaOptions& opts) {
  check_shape(opts.d, opts.m, opts.l);
  if (!(opts.alpha > 1.0 && opts.alpha < 2.0))
    throw Error(ErrorKind::InvalidArgument, "gen_lpa: alpha must lie in (1, 2)");
  if (!(opts.mu >= 0.0 && opts.rho >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "gen_lpa: mu and rho must be nonnegative");
  LpaInstance inst;
  inst.seed = opts.seed;
  inst.mu = opts.mu;
  inst.alpha = opts.alpha;
  inst.rho = opts.rho;
  inst.snr_db = opts.snr_db;
  inst.design = gaussian_matrix(opts.m, opts.d, opts.seed);
  inst.truth = sparse_spikes(opts.d, opts.l, opts.seed);
  const Vector clean = inst.design * inst.truth;
  inst.response = clean + scaled_noise(clean, opts.snr_db, opts.seed);
  return inst;
}

Vector unit_grid(Index nodes) {
  if (nodes < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least two nodes");
  return Vector::LinSpaced(nodes, 0.0, 1.0);
}

std::pair<Vector, Vector> initial_pair(int case_id, Index nodes) {
  const Vector t = unit_grid(nodes);
  const double two_pi = 2.0 * std::numbers::pi;
  const Vector cos_sq = t.unaryExpr([&](double s) {
    const double c = std::cos(two_pi * s);
    return c * c / 4.0;
  });
  const Vector damped = t.unaryExpr([](double s) { return 3.0 * std::exp(-2.0 * s) * std::cos(3.0 * s) / 25.0; });
  const Vector growth = t.unaryExpr([](double s) { return (std::exp(2.0 * s) + std::cos(4.0 * s)) / 10.0; });
  switch (case_id) {
    case 1: return {cos_sq, damped};
    case 2: return {growth, cos_sq};
    case 3: return {growth, damped};
    case 4: return {cos_sq, growth};
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown initial-value case " + std::to_string(case_id));
}

L2Instance gen_l2(int case_id, Index nodes) {
  if (nodes < 3) throw Error(ErrorKind::InvalidArgument, "gen_l2: need at least 3 grid nodes");
  L2Instance inst;
  inst.nodes = nodes;
  inst.space = InnerProductSpace::trapezoidal(nodes);
  inst.case_id = case_id;
  std::tie(inst.u0, inst.u1) = initial_pair(case_id, nodes);
  return inst;
}

double achieved_snr_db(const CompressedSensingInstance& inst) {
  const double noise = inst.noise.squaredNorm();
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10((inst.sensing * inst.truth).squaredNorm() / noise);
}

Vector initial_point(InitKind kind, Index dimension, std::uint64_t seed) {
  if (kind == InitKind::Zero) return Vector::Zero(dimension);
  StreamRng rng(seed, Stream::Init);
  Vector u(dimension);
  for (Index i = 0; i < dimension; ++i) u[i] = rng.normal();
  return u;
}

AssembledProblem assemble(const CompressedSensingInstance& inst) {
  AssembledProblem out{
      {make_quartic_fidelity(inst.sensing, inst.observed), make_l1_resolvent(inst.rho),
       InnerProductSpace::euclidean(inst.sensing.cols())},
      {},
      inst.truth,
      std::nullopt};
  out.metadata = {{"family", "cs"},
                  {"d", std::to_string(inst.sensing.cols())},
                  {"m", std::to_string(inst.sensing.rows())},
                  {"l", std::to_string(inst.sparsity)},
                  {"snr_db", num(inst.snr_db)},
                  {"rho", num(inst.rho)},
                  {"rho_rule", "0.005*||C^T v||_inf unless given"},
                  {"seed", std::to_string(inst.seed)}};
  return out;
}

AssembledProblem assemble(const LpaInstance& inst) {
  AssembledProblem out{
      {make_lpa_gradient(inst.design, inst.response, inst.mu, inst.alpha),
       make_l1_resolvent(inst.rho), InnerProductSpace::euclidean(inst.design.cols())},
      {},
      inst.truth,
      std::nullopt};
  out.metadata = {{"family", "lpa"},
                  {"d", std::to_string(inst.design.cols())},
                  {"m", std::to_string(inst.design.rows())},
                  {"mu", num(inst.mu)},
                  {"alpha", num(inst.alpha)},
                  {"rho", num(inst.rho)},
                  {"snr_db", num(inst.snr_db)},
                  {"seed", std::to_string(inst.seed)}};
  return out;
}

AssembledProblem assemble(const L2Instance& inst) {
  AssembledProblem out{{make_log_operator(), make_l1_resolvent(1.0), inst.space},
                       {},
                       std::nullopt,
                       Vector::Zero(inst.nodes)};
  out.metadata = {{"family", "l2"},
                  {"nodes", std::to_string(inst.nodes)},
                  {"case", std::to_string(inst.case_id)},
                  {"quadrature", "trapezoidal"}};
  return out;
}

}  // namespace mvip
