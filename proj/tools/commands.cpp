#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "circlepat/curvature.hpp"
#include "circlepat/feasibility.hpp"
#include "circlepat/io.hpp"

namespace circlepat::cli {
namespace {

using json = nlohmann::ordered_json;

// Maximum |K(u) - K_stored| a result file may show before report rejects it.
constexpr double kSelfCheckTol = 1e-12;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

void print_issues(std::ostream& err, const std::string& path, const ParseError& e) {
  for (const ParseIssue& i : e.issues()) err << path << ": " << i.location << ": " << i.message << "\n";
}

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

json witness_json(const Witness& w) {
  return {{"faces", w.faces.faces()},
          {"edges", w.edges},
          {"lhs", w.lhs},
          {"rhs", w.rhs},
          {"slack", w.slack()}};
}

json report_json(const FeasibilityReport& rep) {
  json doc = {{"feasible", rep.feasible}, {"marginal", rep.marginal}, {"method", to_string(rep.method)}};
  if (rep.witness) doc["witness"] = witness_json(*rep.witness);
  return doc;
}

std::string join(const std::vector<int>& v) {
  if (v.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

void emit_result(const ResultFile& res, const std::optional<std::string>& out_path, std::ostream& out) {
  const std::string text = print_result(res);
  if (out_path) {
    write_file(*out_path, text);
    spdlog::info("wrote {}", *out_path);
  } else {
    out << text;
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Loads and parses; returns nullopt after printing diagnostics.
std::optional<ProblemFile> load_problem(const std::string& path, std::ostream& err) {
  try {
    return parse_problem(read_file(path));
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    print_issues(err, path, e);
  }
  return std::nullopt;
}

}  // namespace

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  try {
    const ProblemFile p = parse_problem(text);
    out << json{{"valid", true},
                {"faces", p.pattern.face_count()},
                {"edges", p.pattern.edge_count()},
                {"pattern_type", p.pattern.type().name()}}
               .dump()
        << "\n";
    return kExitOk;
  } catch (const ParseError& e) {
    print_issues(err, path, e);
    out << json{{"valid", false}, {"issues", e.issues().size()}}.dump() << "\n";
    return kExitMath;
  }
}

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err) {
  const auto problem = load_problem(path, err);
  if (!problem) return kExitIo;
  const FeasibilityReport rep = check_feasibility(problem->pattern, problem->khat);
  out << report_json(rep).dump(2) << "\n";
  if (rep.feasible && !rep.marginal) return kExitOk;
  err << (rep.marginal ? "marginal: the tightest constraint holds with equality up to rounding\n"
                       : "infeasible target curvature\n");
  return kExitMath;
}

int cmd_solve(const std::string& path, const SolveFlags& flags, std::ostream& out,
              std::ostream& err) {
  auto problem = load_problem(path, err);
  if (!problem) return kExitIo;
  SolveOptions& opts = problem->solve;
  if (flags.tol) opts.tol_residual = *flags.tol;
  if (flags.max_iter) opts.max_iter = *flags.max_iter;
  try {
    opts.check();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }

  const Pattern& pattern = problem->pattern;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (!pattern.type().linear() && !flags.skip_check) {
      const FeasibilityReport rep = check_feasibility(pattern, problem->khat);
      if (!rep.feasible || rep.marginal) {
        err << (rep.marginal ? "marginal" : "infeasible") << " target curvature; witness "
            << report_json(rep).dump() << "\n";
        return kExitMath;
      }
    }

    ResultFile res{.problem = *problem};
    if (pattern.type().linear()) {
      const Eigen::VectorXd u = closed_form_solve_00d(pattern, problem->khat);
      res = make_result(*problem, u);
      res.method = "closed_form";
      res.iterations = 0;
    } else {
      const NewtonResult nr = solve_newton(pattern, problem->khat, opts, problem->initial_u);
      res = make_result(*problem, nr.u);
      res.method = "newton";
      res.iterations = nr.iterations;
      spdlog::info("newton: {} iterations, {} gradient steps", nr.iterations, nr.gradient_steps);
    }
    res.command = "solve";
    res.converged = res.residual_sup <= opts.tol_residual;
    res.termination = res.converged ? "converged" : "residual_above_tol";
    res.wall_time_s = seconds_since(start);
    emit_result(res, flags.out, out);
    if (!res.converged) {
      err << "closed form residual " << res.residual_sup << " exceeds tolerance\n";
      return kExitMath;
    }
    return kExitOk;
  } catch (const NonConvergenceError& e) {
    err << "nonconvergence: " << e.what() << "\n";
    err << "boundary: " << e.diagnosis().describe() << "\n";
    if (is_admissible(e.last_u())) {
      ResultFile res = make_result(*problem, e.last_u());
      res.command = "solve";
      res.method = "newton";
      res.converged = false;
      res.termination = "nonconverged";
      res.iterations = e.iterations();
      res.wall_time_s = seconds_since(start);
      res.toward_zero = e.diagnosis().toward_zero;
      res.toward_neg_infinity = e.diagnosis().toward_neg_infinity;
      emit_result(res, flags.out, out);
    }
    return kExitMath;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitMath;
  }
}

int cmd_flow(const std::string& path, const FlowFlags& flags, std::ostream& out, std::ostream& err) {
  auto problem = load_problem(path, err);
  if (!problem) return kExitIo;
  FlowOptions& opts = problem->flow;
  if (flags.method) opts.method = *flags.method;
  if (flags.integrator) opts.integrator = *flags.integrator;
  if (flags.dt) opts.dt = *flags.dt;
  if (flags.t_max) opts.t_max = *flags.t_max;
  if (flags.tol) opts.tol_residual = *flags.tol;
  if (flags.sample_every) opts.sample_every = *flags.sample_every;
  try {
    opts.check();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }

  const Pattern& pattern = problem->pattern;
  const auto start = std::chrono::steady_clock::now();
  const Eigen::VectorXd u0 =
      problem->initial_u.value_or(energy_reference_point(pattern.face_count()));
  const Trajectory traj = run_flow(pattern, problem->khat, u0, opts);
  const Snapshot& last = traj.final_state();

  ResultFile res = make_result(*problem, last.u);
  res.command = "flow";
  res.method = to_string(opts.method);
  res.converged = traj.converged();
  res.termination = to_string(traj.termination);
  res.iterations = traj.accepted_steps;
  res.wall_time_s = seconds_since(start);
  res.toward_zero = traj.diagnosis.toward_zero;
  res.toward_neg_infinity = traj.diagnosis.toward_neg_infinity;
  for (const Snapshot& s : traj.snapshots) {
    res.trajectory.push_back({s.t, s.residual_sup, s.energy, s.calabi});
  }
  res.radius_velocity = radius_velocity(
      pattern.type(), last.u, flow_velocity(pattern, problem->khat, last.u, opts.method));
  if (const double rate = fitted_log_calabi_rate(traj); std::isfinite(rate)) {
    res.fitted_log_calabi_rate = rate;
  }
  spdlog::info("{} flow: {} accepted, {} rejected, final dt {}", res.method, traj.accepted_steps,
               traj.rejected_steps, traj.final_dt);

  try {
    emit_result(res, flags.out, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  if (traj.converged()) return kExitOk;
  err << "flow did not converge (" << res.termination << ", residual " << last.residual_sup
      << ")\n";
  err << "boundary: " << traj.diagnosis.describe() << "\n";
  return kExitMath;
}

int cmd_report(const std::string& path, std::ostream& out, std::ostream& err) {
  std::optional<ResultFile> res;
  try {
    res = parse_result(read_file(path));
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    print_issues(err, path, e);
    return kExitIo;
  }
  const double drift = result_consistency_error(*res);
  const bool self_ok = drift <= kSelfCheckTol;

  const Pattern& pattern = res->problem.pattern;
  out << "command       " << res->command << "\n";
  out << "method        " << res->method << "\n";
  out << "pattern_type  " << pattern.type().name() << "\n";
  out << "faces         " << pattern.face_count() << "\n";
  out << "edges         " << pattern.edge_count() << "\n";
  out << "problem_hash  " << res->problem_hash << "\n";
  out << "converged     " << (res->converged ? "yes" : "no") << "\n";
  out << "termination   " << res->termination << "\n";
  out << "iterations    " << res->iterations << "\n";
  out << "residual_sup  " << fmt("%.3e", res->residual_sup) << "\n";
  out << "residual_l2   " << fmt("%.3e", res->residual_l2) << "\n";
  out << "toward_zero   " << join(res->toward_zero) << "\n";
  out << "toward_-inf   " << join(res->toward_neg_infinity) << "\n";
  if (res->fitted_log_calabi_rate) {
    out << "log_C_rate    " << fmt("%.6e", *res->fitted_log_calabi_rate) << "\n";
  }
  out << "self_check    " << (self_ok ? "ok" : "fail") << "\n";
  out << "\n# face u r K\n";
  for (Eigen::Index i = 0; i < res->u.size(); ++i) {
    out << i << " " << fmt("%.10e", res->u[i]) << " " << fmt("%.10e", res->r[i]) << " "
        << fmt("%.10e", res->K[i]) << "\n";
  }
  if (!res->trajectory.empty()) {
    out << "\n# t log_C\n";
    for (const TrajectoryRow& row : res->trajectory) {
      if (row.calabi > 0.0) out << fmt("%.10e", row.t) << " " << fmt("%.10e", std::log(row.calabi)) << "\n";
    }
  }
  if (!self_ok) {
    err << "self-check failed: stored K differs from K(u) by " << drift << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace circlepat::cli
