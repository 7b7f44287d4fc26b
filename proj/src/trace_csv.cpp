#include "mvip/trace_csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mvip/errors.hpp"

namespace mvip {
namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

double parse_number(const std::string& field, std::size_t line) {
  char* end = nullptr;
  const double x = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size())
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": bad number '" + field + "'");
  return x;
}

}  // namespace

ConvergenceSeries convergence_series(const IterationTrace& trace) {
  ConvergenceSeries s;
  std::int64_t ns = 0;
  for (const auto& r : trace.records) {
    ns += r.wall_ns;
    s.k.push_back(static_cast<double>(r.k));
    s.error.push_back(r.error);
    s.w_minus_v.push_back(r.w_minus_v);
    s.seconds.push_back(static_cast<double>(ns) * 1e-9);
  }
  return s;
}

std::string convergence_csv(const IterationTrace& trace) {
  if (trace.records.empty())
    throw Error(ErrorKind::InvalidArgument, "convergence csv: trace is empty");
  const ConvergenceSeries s = convergence_series(trace);
  std::string out = "k,E_k,w_minus_v,seconds\n";
  for (std::size_t i = 0; i < s.k.size(); ++i) {
    out += std::to_string(static_cast<long>(s.k[i]));
    out += ',' + fmt17(s.error[i]) + ',' + fmt17(s.w_minus_v[i]) + ',' + fmt17(s.seconds[i]) + '\n';
  }
  return out;
}

void write_convergence_csv(const IterationTrace& trace, const std::filesystem::path& path) {
  write_text(path, convergence_csv(trace));
}

ConvergenceSeries parse_convergence_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "k,E_k,w_minus_v,seconds")
    throw Error(ErrorKind::Parse, "convergence csv: missing or unexpected header");
  ConvergenceSeries s;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 4)
      throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": expected 4 columns");
    s.k.push_back(parse_number(fields[0], lineno));
    s.error.push_back(parse_number(fields[1], lineno));
    s.w_minus_v.push_back(parse_number(fields[2], lineno));
    s.seconds.push_back(parse_number(fields[3], lineno));
  }
  return s;
}

ConvergenceSeries read_convergence_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_convergence_csv(buf.str());
}

void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path) {
  std::string out =
      "k,theta,step_size,backtracks,delta,w_minus_v,phi_norm,step_norm,E_k,reference_error,"
      "wall_ns,forward_evals,resolvent_evals\n";
  for (const auto& r : trace.records) {
    out += std::to_string(r.k) + ',' + fmt17(r.theta) + ',' + fmt17(r.step_size) + ',' +
           std::to_string(r.backtracks) + ',' + fmt17(r.delta) + ',' + fmt17(r.w_minus_v) + ',' +
           fmt17(r.phi_norm) + ',' + fmt17(r.step_norm) + ',' + fmt17(r.error) + ',' +
           fmt17(r.reference_error) + ',' + std::to_string(r.wall_ns) + ',' +
           std::to_string(r.forward_evals) + ',' + std::to_string(r.resolvent_evals) + '\n';
  }
  write_text(path, out);
}

double rate_estimate(const ConvergenceSeries& series) {
  return rate_estimate(series.k, series.w_minus_v);
}

}  // namespace mvip
