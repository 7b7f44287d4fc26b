#include "mvip/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mvip/errors.hpp"
#include "mvip/trace_csv.hpp"

namespace mvip::bench {
namespace {

using nlohmann::json;

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, x);
  return buf;
}

std::string fmt17(double x) { return fmt("%.17g", x); }

LineSearchParams parse_linesearch(const json& j, LineSearchParams base) {
  base.initial_step = j.value("s", base.initial_step);
  base.shrink = j.value("mu", base.shrink);
  base.ratio = j.value("sigma", base.ratio);
  base.max_backtracks = j.value("max_backtracks", base.max_backtracks);
  return base;
}

StepSchedule parse_schedule(const json& j, StepSchedule fallback) {
  if (!j.contains("step")) return fallback;
  const json& step = j.at("step");
  if (step.is_number()) return StepSchedule::constant(step.get<double>());
  const std::string kind = step.get<std::string>();
  if (kind == "ratio") return StepSchedule::ratio();
  if (kind == "armijo") return StepSchedule::armijo();
  throw Error(ErrorKind::Parse, "unknown step rule '" + kind + "'");
}

SolverSpec parse_solver(const json& j) {
  const std::string method = j.at("method").get<std::string>();
  SolverSpec out;
  if (method == "ifb") {
    SolverConfig cfg = SolverConfig::experiment_defaults();
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.linesearch = parse_linesearch(j, cfg.linesearch);
    cfg.warm_start = j.value("warm_start", false);
    cfg.phi_zero_tol = j.value("phi_zero_tol", cfg.phi_zero_tol);
    const double cap = 0.99 * inertia_cap(cfg.gamma, cfg.linesearch.ratio);
    const double theta = j.value("theta", cap);
    const json inertia = j.value("inertia", json("experiment"));
    if (inertia.is_number()) {
      cfg.inertia = InertiaSchedule::constant(inertia.get<double>());
    } else if (inertia == "experiment") {
      cfg.inertia = InertiaSchedule::sqrt_decay(theta);
    } else if (inertia == "theory") {
      cfg.inertia = InertiaSchedule::constant(theta);
    } else if (inertia == "none") {
      cfg.inertia = InertiaSchedule::none();
    } else {
      throw Error(ErrorKind::Parse, "unknown inertia '" + inertia.dump() + "'");
    }
    cfg.run.stop = StoppingRule::iter_cap_only();
    cfg.validate();
    out.config = cfg;
    out.name = j.value("name", "IFB[" + cfg.inertia.describe() + (cfg.warm_start ? ",warm-start]" : "]"));
    return out;
  }

  BaselineConfig cfg;
  if (method == "zw") {
    cfg = BaselineConfig::zhang_wang();
    cfg.step = parse_schedule(j, cfg.step);
    if (cfg.step.kind == StepSchedule::Kind::Armijo)
      cfg.linesearch = parse_linesearch(j, BaselineConfig::zhang_wang_armijo().linesearch);
    cfg.gamma = j.value("gamma", cfg.gamma);
  } else if (method == "tc") {
    cfg = BaselineConfig::tan_cho();
    cfg.linesearch.initial_step = j.value("delta", cfg.linesearch.initial_step);
    cfg.linesearch.shrink = j.value("l", cfg.linesearch.shrink);
    cfg.tc_mu = j.value("mu", cfg.tc_mu);
    cfg.linesearch.ratio = cfg.tc_mu;
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.tc_theta = j.value("theta", cfg.tc_theta);
    const std::string variant = j.value("variant", "consistent");
    if (variant == "literal") {
      cfg.tc_variant = TanChoVariant::Literal;
    } else if (variant != "consistent") {
      throw Error(ErrorKind::Parse, "unknown TC variant '" + variant + "'");
    }
  } else if (method == "tseng") {
    cfg = BaselineConfig::tseng();
    cfg.linesearch = parse_linesearch(j, cfg.linesearch);
  } else if (method == "fb") {
    cfg = BaselineConfig::forward_backward(1.0);
    cfg.step = parse_schedule(j, cfg.step);
  } else if (method == "jx") {
    throw Error(ErrorKind::Parse,
                "jx needs a projection resolvent; none of the benchmark families provides one");
  } else {
    throw Error(ErrorKind::Parse, "unknown method '" + method + "'");
  }
  cfg.phi_zero_tol = j.value("phi_zero_tol", cfg.phi_zero_tol);
  cfg.validate();
  out.name = j.value("name", cfg.label());
  out.config = std::move(cfg);
  return out;
}

ProblemSpec parse_problem(const json& j) {
  ProblemSpec p;
  const std::string family = j.at("family").get<std::string>();
  if (family == "cs") {
    p.family = Family::CompressedSensing;
  } else if (family == "lpa") {
    p.family = Family::Lpa;
  } else if (family == "l2") {
    p.family = Family::L2;
  } else {
    throw Error(ErrorKind::Parse, "unknown problem family '" + family + "'");
  }
  p.d = j.value("d", p.d);
  p.m = j.value("m", p.d / 2);
  p.l = j.value("l", p.l);
  if (j.contains("snr_db"))
    p.snr_db = j.at("snr_db").is_null() ? std::numeric_limits<double>::infinity()
                                        : j.at("snr_db").get<double>();
  if (j.contains("rho") && !j.at("rho").is_null()) p.rho = j.at("rho").get<double>();
  p.mu = j.value("mu", p.mu);
  p.alpha = j.value("alpha", p.alpha);
  p.nodes = j.value("nodes", p.nodes);
  if (p.family == Family::L2) {
    p.instances = j.value("cases", std::vector<std::uint64_t>{1, 2, 3, 4});
  } else {
    p.instances = j.value("seeds", std::vector<std::uint64_t>{1});
  }
  const std::string init = j.value("init", "zero");
  if (init == "random") {
    p.init = InitKind::Random;
  } else if (init != "zero") {
    throw Error(ErrorKind::Parse, "unknown init '" + init + "'");
  }
  if (p.instances.empty()) throw Error(ErrorKind::Parse, "problem needs at least one seed or case");
  return p;
}

StopKind parse_stop_kind(const std::string& s) {
  if (s == "successive_diff") return StopKind::SuccessiveDiff;
  if (s == "distance_to_reference") return StopKind::DistanceToReference;
  if (s == "mean_squared_error") return StopKind::MeanSquaredError;
  if (s == "residual") return StopKind::Residual;
  if (s == "iter_cap_only") return StopKind::IterCapOnly;
  throw Error(ErrorKind::Parse, "unknown stopping rule '" + s + "'");
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-') ? c : '_';
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << text;
}

RunControl cell_control(const RunSpec& spec, const BenchProblem& p) {
  RunControl rc;
  rc.max_iters = spec.max_iters;
  rc.check_invariants = spec.check_invariants;
  rc.known_solution = p.assembled.known_solution;
  rc.stop.kind = spec.stop_kind;
  rc.stop.tol = spec.stop_tol;
  const auto& reference =
      p.assembled.ground_truth ? p.assembled.ground_truth : p.assembled.known_solution;
  if (reference) {
    rc.stop.reference = *reference;
  } else if (spec.stop_kind == StopKind::DistanceToReference ||
             spec.stop_kind == StopKind::MeanSquaredError) {
    throw Error(ErrorKind::InvalidArgument, "stopping rule needs a reference; " + p.label + " has none");
  }
  return rc;
}

SolveResult solve_cell(const RunSpec& spec, const SolverSpec& solver, const BenchProblem& p) {
  const RunControl rc = cell_control(spec, p);
  const auto& problem = p.assembled.problem;
  if (const auto* ifb = std::get_if<SolverConfig>(&solver.config)) {
    SolverConfig cfg = *ifb;
    cfg.run = rc;
    SolveResult r = solve(problem, p.u0, p.u1, cfg);
    r.trace.method = solver.name;
    return r;
  }
  SolveResult r = solve_baseline(problem, p.u0, p.u1, std::get<BaselineConfig>(solver.config), rc);
  r.trace.method = solver.name;
  return r;
}

}  // namespace

void RunSpec::validate() const {
  if (repetitions < 1) throw Error(ErrorKind::InvalidArgument, "run spec: repetitions must be >= 1");
  if (solvers.empty()) throw Error(ErrorKind::InvalidArgument, "run spec: at least one solver required");
  if (max_iters < 1) throw Error(ErrorKind::InvalidArgument, "run spec: max_iters must be >= 1");
}

RunSpec parse_run_spec(const std::string& text) {
  RunSpec spec;
  try {
    const json j = json::parse(text);
    spec.name = j.value("name", spec.name);
    spec.problem = parse_problem(j.at("problem"));
    for (const auto& s : j.at("solvers")) spec.solvers.push_back(parse_solver(s));
    if (j.contains("stop")) {
      const json& stop = j.at("stop");
      spec.stop_kind = parse_stop_kind(stop.at("kind").get<std::string>());
      spec.stop_tol = stop.value("tol", spec.stop_tol);
    }
    spec.max_iters = j.value("max_iters", spec.max_iters);
    spec.repetitions = j.value("repetitions", spec.repetitions);
    spec.check_invariants = j.value("check_invariants", spec.check_invariants);
    spec.timing = j.value("timing", spec.timing);
    spec.threads = j.value("threads", spec.threads);
    if (j.contains("output_dir")) spec.output_dir = j.at("output_dir").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("run spec: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) throw;
    throw Error(ErrorKind::Parse, std::string("run spec: ") + e.what());
  }
  spec.source = text;
  try {
    spec.validate();
    StoppingRule probe{spec.stop_kind, spec.stop_tol, Vector::Zero(1)};
    probe.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, std::string("run spec: ") + e.what());
  }
  return spec;
}

RunSpec load_run_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_spec(buf.str());
}

std::vector<BenchProblem> build_problems(const ProblemSpec& spec) {
  std::vector<BenchProblem> out;
  for (const std::uint64_t id : spec.instances) {
    switch (spec.family) {
      case Family::CompressedSensing: {
        const auto inst = gen_cs({spec.d, spec.m, spec.l, spec.snr_db, spec.rho, id});
        Vector u0 = initial_point(spec.init, spec.d, id);
        out.push_back({"cs(d=" + std::to_string(spec.d) + ",m=" + std::to_string(spec.m) +
                           ",l=" + std::to_string(spec.l) + ",seed=" + std::to_string(id) + ")",
                       id, assemble(inst), u0, u0});
        break;
      }
      case Family::Lpa: {
        const auto inst = gen_lpa({spec.d, spec.m, spec.l, spec.snr_db, spec.mu, spec.alpha,
                                   spec.rho.value_or(0.01), id});
        Vector u0 = initial_point(spec.init, spec.d, id);
        out.push_back({"lpa(d=" + std::to_string(spec.d) + ",m=" + std::to_string(spec.m) +
                           ",seed=" + std::to_string(id) + ")",
                       id, assemble(inst), u0, u0});
        break;
      }
      case Family::L2: {
        const auto inst = gen_l2(static_cast<int>(id), spec.nodes);
        out.push_back({"l2(N=" + std::to_string(spec.nodes) + ",case=" + std::to_string(id) + ")",
                       id, assemble(inst), inst.u0, inst.u1});
        break;
      }
    }
  }
  return out;
}

RunReport run(const RunSpec& spec) {
  spec.validate();
  const std::vector<BenchProblem> problems = build_problems(spec.problem);

  struct Cell {
    std::size_t problem, solver;
    int rep;
  };
  std::vector<Cell> cells;
  for (std::size_t p = 0; p < problems.size(); ++p)
    for (std::size_t s = 0; s < spec.solvers.size(); ++s)
      for (int r = 0; r < spec.repetitions; ++r) cells.push_back({p, s, r});

  const bool write = !spec.output_dir.empty();
  const auto trace_dir = spec.output_dir / "traces";
  if (write) std::filesystem::create_directories(trace_dir);

  std::vector<CellReport> reports(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      const BenchProblem& p = problems[c.problem];
      const SolverSpec& s = spec.solvers[c.solver];
      CellReport& rep = reports[i];
      rep.solver = s.name;
      rep.problem = p.label;
      rep.instance = p.instance;
      rep.repetition = c.rep;
      try {
        const SolveResult r = solve_cell(spec, s, p);
        const IterationTrace& t = r.trace;
        rep.iterations = t.iterations();
        rep.seconds = t.elapsed_seconds();
        if (!t.records.empty()) rep.final_error = t.records.back().error;
        if (p.assembled.ground_truth) {
          rep.mse = p.assembled.problem.space.squared_norm(r.solution - *p.assembled.ground_truth) /
                    static_cast<double>(r.solution.size());
        }
        rep.status = t.status;
        rep.detail = t.detail;
        rep.min_step = t.min_step_size();
        std::tie(rep.delta_min, rep.delta_max) = t.delta_range();
        rep.violations = t.violations.total();
        if (write && !t.records.empty()) {
          const std::string stem = sanitize(p.label) + "__" + sanitize(s.name) + "__rep" +
                                   std::to_string(c.rep);
          write_convergence_csv(t, trace_dir / (stem + ".csv"));
          write_trace_csv(t, trace_dir / (stem + "_detail.csv"));
        }
      } catch (const std::exception& e) {
        rep.status = TerminalStatus::Diverged;
        rep.detail = std::string("error: ") + e.what();
      }
    }
  };

  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  if (spec.timing) threads = 1;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  RunReport report;
  report.name = spec.name;
  report.cells = std::move(reports);

  if (write) {
    write_file(spec.output_dir / "spec.json", spec.source.empty() ? "{}\n" : spec.source);
    write_file(spec.output_dir / "report.csv", report.cells_csv());
    write_file(spec.output_dir / "summary.csv", report.summary_csv());
    write_file(spec.output_dir / "report.txt", report.table());
  }
  return report;
}

bool RunReport::all_valid() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellReport& c) { return c.valid(); });
}

std::vector<SummaryRow> RunReport::summary() const {
  std::vector<SummaryRow> rows;
  std::map<std::pair<std::string, std::string>, std::vector<const CellReport*>> groups;
  std::vector<std::pair<std::string, std::string>> order;
  for (const auto& c : cells) {
    auto key = std::make_pair(c.problem, c.solver);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&c);
  }
  for (const auto& key : order) {
    const auto& group = groups[key];
    std::vector<double> secs;
    for (const auto* c : group) secs.push_back(c->seconds);
    std::sort(secs.begin(), secs.end());
    const std::size_t n = secs.size();
    const double median = n % 2 ? secs[n / 2] : 0.5 * (secs[n / 2 - 1] + secs[n / 2]);
    const CellReport& first = *group.front();
    SummaryRow row{first.solver, first.problem, first.instance, first.iterations, median,
                   first.final_error, first.mse, first.status, true};
    for (const auto* c : group) row.valid = row.valid && c->valid();
    rows.push_back(row);
  }
  return rows;
}

std::string RunReport::cells_csv() const {
  std::string out =
      "solver,problem,instance,repetition,iterations,seconds,final_error,mse,status,min_step,"
      "delta_min,delta_max,violations,valid\n";
  for (const auto& c : cells) {
    out += c.solver + ',' + '"' + c.problem + '"' + ',' + std::to_string(c.instance) + ',' +
           std::to_string(c.repetition) + ',' + std::to_string(c.iterations) + ',' +
           fmt17(c.seconds) + ',' + fmt17(c.final_error) + ',' + fmt17(c.mse) + ',' +
           to_string(c.status) + ',' + fmt17(c.min_step) + ',' + fmt17(c.delta_min) + ',' +
           fmt17(c.delta_max) + ',' + std::to_string(c.violations) + ',' +
           (c.valid() ? "VALID" : "INVALID") + '\n';
  }
  return out;
}

std::string RunReport::summary_csv() const {
  std::string out = "solver,problem,instance,iterations,median_seconds,final_error,mse,status,valid\n";
  for (const auto& r : summary()) {
    out += r.solver + ',' + '"' + r.problem + '"' + ',' + std::to_string(r.instance) + ',' +
           std::to_string(r.iterations) + ',' + fmt17(r.median_seconds) + ',' +
           fmt17(r.final_error) + ',' + fmt17(r.mse) + ',' + to_string(r.status) + ',' +
           (r.valid ? "VALID" : "INVALID") + '\n';
  }
  return out;
}

std::string RunReport::table() const {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-30s %-20s %7s %12s %11s %11s %-18s %s\n", "problem", "solver",
                "Iter.", "CPU(s)", "E_k", "MSE", "status", "check");
  os << "run: " << name << '\n' << line;
  for (const auto& r : summary()) {
    std::snprintf(line, sizeof(line), "%-30s %-20s %7ld %12.6f %11.3e %11.3e %-18s %s\n",
                  r.problem.c_str(), r.solver.c_str(), r.iterations, r.median_seconds,
                  r.final_error, r.mse, to_string(r.status), r.valid ? "VALID" : "INVALID");
    os << line;
  }
  return os.str();
}

}  // namespace mvip::bench
