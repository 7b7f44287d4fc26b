#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "mvip/operators.hpp"

namespace mvip {

/// min 1/4 ||Cu - v||^4 + rho ||u||_1 with v = C u_true + noise.
struct CompressedSensingInstance {
  Matrix sensing;   // m x d, i.i.d. N(0, 1)
  Vector truth;     // l spikes uniform on [-2, 2]
  Vector noise;
  Vector observed;  // sensing * truth + noise
  double rho = 0.0;
  double snr_db = 40.0;  // +inf means noiseless
  Index sparsity = 0;
  std::uint64_t seed = 0;
};

/// min 1/2 ||Qu - q||^2 + mu sum |u_i|^alpha + rho ||u||_1.
struct LpaInstance {
  Matrix design;  // Q, m x d
  Vector response;  // q
  Vector truth;     // sparse signal used to synthesize q
  double mu = 0.01;
  double alpha = 1.5;
  double rho = 0.01;
  double snr_db = 40.0;
  std::uint64_t seed = 0;
};

/// B(u) = u log(1 + |u|), A = subdifferential of int_0^1 |u(t)| dt on a grid over [0, 1].
struct L2Instance {
  Index nodes = 1001;
  InnerProductSpace space = InnerProductSpace::trapezoidal(3);
  int case_id = 1;
  Vector u0;
  Vector u1;
};

struct CsOptions {
  Index d = 512;
  Index m = 256;
  Index l = 10;
  double snr_db = 40.0;
  /// Defaults to 0.005 * ||C^T v||_inf. Zero is accepted as the rho -> 0 limit.
  std::optional<double> rho;
  std::uint64_t seed = 1;
};

struct LpaOptions {
  Index d = 512;
  Index m = 256;
  Index l = 10;
  double snr_db = 40.0;
  double mu = 0.01;
  double alpha = 1.5;
  double rho = 0.01;
  std::uint64_t seed = 1;
};

CompressedSensingInstance gen_cs(const CsOptions& opts);
LpaInstance gen_lpa(const LpaOptions& opts);
L2Instance gen_l2(int case_id, Index nodes = 1001);

/// 10 log10(||C u_true||^2 / ||noise||^2); +inf when noiseless.
double achieved_snr_db(const CompressedSensingInstance& inst);

/// Uniform grid t_i = i / (N - 1) on [0, 1].
Vector unit_grid(Index nodes);

/// Closed-form initial pairs (u0, u1) for cases 1-4, sampled on the grid.
std::pair<Vector, Vector> initial_pair(int case_id, Index nodes);

enum class InitKind { Zero, Random };

/// u0 = u1 starting point: zeros, or N(0, 1) entries drawn from the Init stream.
Vector initial_point(InitKind kind, Index dimension, std::uint64_t seed);

struct AssembledProblem {
  InclusionProblem problem;
  std::map<std::string, std::string> metadata;
  std::optional<Vector> ground_truth;    // the signal an experiment tries to recover
  std::optional<Vector> known_solution;  // a verified zero of A + B
};

AssembledProblem assemble(const CompressedSensingInstance& inst);
AssembledProblem assemble(const LpaInstance& inst);
AssembledProblem assemble(const L2Instance& inst);

}  // namespace mvip
