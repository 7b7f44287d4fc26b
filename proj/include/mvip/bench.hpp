#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mvip/baselines.hpp"
#include "mvip/problems.hpp"
#include "mvip/solver.hpp"

namespace mvip::bench {

enum class Family { CompressedSensing, Lpa, L2 };

struct ProblemSpec {
  Family family = Family::CompressedSensing;
  Index d = 128;
  Index m = 64;
  Index l = 4;
  double snr_db = 40.0;
  std::optional<double> rho;  // CS: default rule; LPA: 0.01
  double mu = 0.01;
  double alpha = 1.5;
  Index nodes = 1001;
  /// Instance ids: seeds for CS/LPA, initial-value cases 1-4 for L2.
  std::vector<std::uint64_t> instances{1};
  InitKind init = InitKind::Zero;
};

struct SolverSpec {
  std::string name;
  std::variant<SolverConfig, BaselineConfig> config;
};

struct RunSpec {
  std::string name = "run";
  ProblemSpec problem;
  std::vector<SolverSpec> solvers;
  StopKind stop_kind = StopKind::SuccessiveDiff;
  double stop_tol = 1e-12;
  long max_iters = 1000;
  int repetitions = 1;
  bool check_invariants = true;
  /// Timing mode pins every cell to one thread.
  bool timing = false;
  unsigned threads = 0;  // 0: hardware concurrency
  std::filesystem::path output_dir;  // empty: nothing is written
  std::string source;                // original spec text, copied into the output

  /// Throws Error(InvalidArgument) unless repetitions >= 1 and there is a solver.
  void validate() const;
};

/// Parses the JSON run-spec schema documented in README.md.
/// Throws Error(Parse) on malformed input.
RunSpec parse_run_spec(const std::string& text);
RunSpec load_run_spec(const std::filesystem::path& path);

struct CellReport {
  std::string solver;
  std::string problem;
  std::uint64_t instance = 0;
  int repetition = 0;
  long iterations = 0;
  double seconds = 0.0;
  double final_error = kNaN;      // E_k at the last iteration
  double mse = kNaN;              // ||u_final - ground truth||^2 / dimension (CS, LPA only)
  TerminalStatus status = TerminalStatus::IterCap;
  std::string detail;
  double min_step = kNaN;
  double delta_min = kNaN;
  double delta_max = kNaN;
  long violations = 0;

  bool valid() const { return violations == 0; }
};

struct SummaryRow {
  std::string solver;
  std::string problem;
  std::uint64_t instance = 0;
  long iterations = 0;
  double median_seconds = 0.0;
  double final_error = kNaN;
  double mse = kNaN;
  TerminalStatus status = TerminalStatus::IterCap;
  bool valid = true;
};

struct RunReport {
  std::string name;
  std::vector<CellReport> cells;

  bool all_valid() const;
  /// One row per (solver, instance), CPU time as the median over repetitions.
  std::vector<SummaryRow> summary() const;
  std::string cells_csv() const;
  std::string summary_csv() const;
  std::string table() const;
};

/// One generated instance with the reference used by error metrics.
struct BenchProblem {
  std::string label;
  std::uint64_t instance = 0;
  AssembledProblem assembled;
  Vector u0;
  Vector u1;
};

std::vector<BenchProblem> build_problems(const ProblemSpec& spec);

/// Runs every (solver, instance, repetition) cell. Solver errors are captured per
/// cell. With a non-empty output_dir, writes spec.json, report.csv, summary.csv,
/// report.txt and traces/<cell>.csv (+ _detail.csv).
RunReport run(const RunSpec& spec);

}  // namespace mvip::bench
