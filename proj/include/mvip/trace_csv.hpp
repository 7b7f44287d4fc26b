#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mvip/trace.hpp"

namespace mvip {

/// Plot-ready convergence data: one row per iteration.
struct ConvergenceSeries {
  std::vector<double> k;
  std::vector<double> error;      // E_k
  std::vector<double> w_minus_v;  // ||w_k - v_k||
  std::vector<double> seconds;    // cumulative wall clock
};

ConvergenceSeries convergence_series(const IterationTrace& trace);

/// Header "k,E_k,w_minus_v,seconds", then one row per iteration, values printed
/// with 17 significant digits so that parsing reproduces them bit-exactly.
/// Throws Error(InvalidArgument) for an empty trace and Error(Io) on write failure.
void write_convergence_csv(const IterationTrace& trace, const std::filesystem::path& path);
std::string convergence_csv(const IterationTrace& trace);

ConvergenceSeries read_convergence_csv(const std::filesystem::path& path);
ConvergenceSeries parse_convergence_csv(const std::string& text);

/// Every IterationRecord field, for replay and debugging.
void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path);

double rate_estimate(const ConvergenceSeries& series);

}  // namespace mvip
