// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero if
// any criterion fails.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <spdlog/spdlog.h>

#include "circlepat/curvature.hpp"
#include "circlepat/feasibility.hpp"
#include "circlepat/io.hpp"
#include "circlepat/solve.hpp"
#include "commands.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace circlepat;
using std::numbers::pi;

namespace {

// Pinned tolerances.
constexpr double kC1U = 1e-9, kC1K = 1e-10, kC1Seconds = 1.0;
constexpr double kC2Residual = 1e-12, kC2USame = 1e-12;
constexpr int kC2NewtonIters = 2;
constexpr double kC3Rel = 1e-6, kC3Sym = 1e-13;
constexpr double kC4Small = 1e-5, kC4Large = 1e-4, kC4Sum = 1e-4;
constexpr double kC5Residual = 1e-8, kC5TMax = 50.0, kC5Slope = -0.1, kC5Seconds = 5.0;
constexpr double kC6Err = 1e-8;
constexpr double kC8FlowTol = 1e-8, kC8FeasibleTMax = 400.0, kC8InfeasibleTMax = 50.0;
constexpr double kC9Err = 1e-7;
constexpr double kC10SelfCheck = 1e-12;

// Nonincreasing up to the rounding of the energy evaluation itself.
bool nonincreasing(double before, double after) {
  return after <= before + 1e-12 * (1.0 + std::abs(before));
}

double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

Pattern torus(PatternType type, double theta, int m = 2, int n = 2) {
  return uniform_pattern(builtin_torus_grid(m, n), type, theta);
}

Eigen::VectorXd constant(int n, double x) { return Eigen::VectorXd::Constant(n, x); }

Outcome criterion1() {
  const Pattern p = torus(PatternType::type_110(), 1.0);
  const Eigen::VectorXd khat = constant(4, 2 * pi);
  NewtonResult r;
  const double t = seconds([&] { r = solve_newton(p, khat); });
  const double du = (r.u.array() + 1.0).abs().maxCoeff();
  const double dk = (curvature_vector(p, r.u) - khat).lpNorm<Eigen::Infinity>();
  return {du < kC1U && dk < kC1K && t < kC1Seconds,
          "max|u+1| = " + sci(du) + ", |K-2pi| = " + sci(dk) + ", " + sci(t) + " s"};
}

Outcome criterion2() {
  std::mt19937_64 rng(2002);
  double worst_res = 0.0, worst_du = 0.0;
  int worst_iters = 0, cases = 0;
  for (int delta : {1, 0, -1}) {
    for (int m = 1; m <= 8; ++m) {
      for (int n = 1; n <= 8; ++n) {
        const Pattern p = fixtures::random_theta_pattern(rng, builtin_torus_grid(m, n), PatternType::type_00d(delta));
        const Eigen::VectorXd khat = fixtures::random_u(rng, m * n, 0.1, 10.0);
        const Eigen::VectorXd u = closed_form_solve_00d(p, khat);
        worst_res = std::max(worst_res, (curvature_vector(p, u) - khat).lpNorm<Eigen::Infinity>());
        const NewtonResult r = solve_newton(p, khat);
        worst_iters = std::max(worst_iters, r.iterations);
        worst_du = std::max(worst_du, (r.u - u).lpNorm<Eigen::Infinity>() / (1.0 + u.lpNorm<Eigen::Infinity>()));
        ++cases;
      }
    }
  }
  return {worst_res < kC2Residual && worst_du < kC2USame && worst_iters <= kC2NewtonIters,
          std::to_string(cases) + " grids, residual " + sci(worst_res) + ", |u_newton - u| " + sci(worst_du) +
              ", newton iterations <= " + std::to_string(worst_iters)};
}

// Central difference of K in direction j.
Eigen::VectorXd fd_column(const Pattern& p, const Eigen::VectorXd& u, int j) {
  const double h = 1e-6 * std::max(1.0, std::abs(u[j]));
  Eigen::VectorXd up = u, dn = u;
  up[j] += h;
  dn[j] -= h;
  return (curvature_vector(p, up) - curvature_vector(p, dn)) / (2 * h);
}

Outcome criterion3() {
  std::mt19937_64 rng(3003);
  double worst_rel = 0.0, worst_sym = 0.0;
  int chol_fail = 0, points = 0;
  for (PatternType type : fixtures::all_types()) {
    for (int k = 0; k < 200; ++k) {
      const int n = std::uniform_int_distribution<int>(1, 8)(rng);
      const Pattern p = fixtures::random_theta_pattern(rng, fixtures::random_complex(rng, n), type);
      const Eigen::VectorXd u = fixtures::random_u(rng, n);
      const Eigen::MatrixXd d = laplacian(p, u).dense();
      for (int j = 0; j < n; ++j) {
        const Eigen::VectorXd fd = fd_column(p, u, j);
        for (int i = 0; i < n; ++i) {
          const double rel = d(i, j) == 0.0 ? std::abs(fd[i]) : std::abs(fd[i] - d(i, j)) / std::abs(d(i, j));
          worst_rel = std::max(worst_rel, rel);
        }
      }
      worst_sym = std::max(worst_sym, (d - d.transpose()).cwiseAbs().maxCoeff());
      if (Eigen::LLT<Eigen::MatrixXd>(-d).info() != Eigen::Success) ++chol_fail;
      ++points;
    }
  }
  return {worst_rel < kC3Rel && worst_sym <= kC3Sym && chol_fail == 0,
          std::to_string(points) + " points, max rel err " + sci(worst_rel) + ", asymmetry " + sci(worst_sym) +
              ", cholesky failures " + std::to_string(chol_fail)};
}

Outcome criterion4() {
  const double small = angles_110(1.0, {-1e-6, -1.0}).beta1;
  const double large = angles_110(1.0, {-1e6, -1.0}).beta1;
  const AnglePair far = angles_110(1.0, {-1e6, -1e6});
  const double gap = pi - (far.beta1 + far.beta2);
  return {small < kC4Small && large > pi - kC4Large && gap < kC4Sum,
          "beta(0-) = " + sci(small) + ", pi - beta(-inf) = " + sci(pi - large) + ", pi - sum = " + sci(gap)};
}

Outcome criterion5() {
  const Pattern p = torus(PatternType::type_110(), 1.0);
  const Eigen::VectorXd khat = constant(4, 2 * pi);
  Outcome out;
  for (FlowMethod m : {FlowMethod::Ricci, FlowMethod::Calabi}) {
    Trajectory t;
    const double secs = seconds([&] {
      t = run_flow(p, khat, constant(4, -0.5), {.method = m, .t_max = kC5TMax, .tol_residual = kC5Residual});
    });
    bool mono = true;
    for (std::size_t i = 1; i < t.snapshots.size(); ++i) {
      mono = mono && nonincreasing(t.snapshots[i - 1].energy, t.snapshots[i].energy) &&
             nonincreasing(t.snapshots[i - 1].calabi, t.snapshots[i].calabi);
    }
    const double slope = fitted_log_calabi_rate(t);
    const bool ok = t.converged() && t.final_state().t < kC5TMax && mono && slope < kC5Slope && secs < kC5Seconds;
    out.pass = out.pass && ok;
    out.detail += to_string(m) + ": t = " + sci(t.final_state().t) + ", residual " +
                  sci(t.final_state().residual_sup) + ", monotone " + (mono ? "yes" : "no") + ", slope " +
                  sci(slope) + ", " + sci(secs) + " s";
    if (m == FlowMethod::Ricci) out.detail += "; ";
  }
  return out;
}

Outcome criterion6() {
  const Pattern p = torus(PatternType::type_00d(0), 1.0, 1, 1);
  const double khat = 2 * pi, u0 = -0.5;
  const Trajectory t = ricci_flow(p, constant(1, khat), constant(1, u0),
                                  {.dt = 0.01, .t_max = 1.0, .tol_residual = 1e-300, .adapt = false});
  const double exact = (u0 + khat / 4) * std::exp(-4.0) - khat / 4;
  const double err = std::abs(t.final_state().u[0] - exact);
  return {err < kC6Err && t.final_state().t == 1.0, "|u(1) - exact| = " + sci(err)};
}

Outcome criterion7() {
  std::mt19937_64 rng(7007);
  std::uniform_real_distribution<double> k(1e-3, 5 * pi);
  int disagree = 0, marginal = 0, infeasible = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 10)(rng);
    const PatternComplex cx = fixtures::random_complex(rng, n);
    Eigen::VectorXd khat(n);
    for (int i = 0; i < n; ++i) khat[i] = k(rng);
    const FeasibilityReport a = check_exhaustive(cx, khat);
    const FeasibilityReport b = check_maxflow(cx, khat);
    if (a.marginal || b.marginal) {
      ++marginal;
    } else if (a.feasible != b.feasible) {
      ++disagree;
    }
    infeasible += !a.feasible;
  }
  const PatternComplex tight = builtin_torus_grid(2, 2);
  const bool tight_ok = !check_exhaustive(tight, constant(4, 4 * pi)).feasible &&
                        !check_maxflow(tight, constant(4, 4 * pi)).feasible;
  return {disagree == 0 && tight_ok,
          "500 instances (" + std::to_string(infeasible) + " infeasible), disagreements " +
              std::to_string(disagree) + ", marginal " + std::to_string(marginal) + ", tight torus " +
              (tight_ok ? "infeasible for both" : "NOT rejected")};
}

Outcome criterion8() {
  std::mt19937_64 rng(8008);
  int feasible_ok = 0, infeasible_ok = 0;
  std::string notes;
  for (int k = 0; k < 20; ++k) {
    const int m = std::uniform_int_distribution<int>(2, 4)(rng), n = std::uniform_int_distribution<int>(1, 4)(rng);
    const Pattern p = fixtures::random_theta_pattern(rng, builtin_torus_grid(m, n), PatternType::type_110());
    const Eigen::VectorXd khat = curvature_vector(p, fixtures::random_u(rng, m * n));
    bool ok = check_feasibility(p, khat).feasible;
    try {
      ok = ok && solve_newton(p, khat).residual_sup <= SolveOptions{}.tol_residual;
    } catch (const NonConvergenceError&) {
      ok = false;
    }
    for (FlowMethod fm : {FlowMethod::Ricci, FlowMethod::Calabi}) {
      const Trajectory t = run_flow(p, khat, constant(m * n, -1.0),
                                    {.method = fm, .t_max = kC8FeasibleTMax, .tol_residual = kC8FlowTol});
      ok = ok && t.converged();
      if (!t.converged()) notes += " feasible#" + std::to_string(k) + " " + to_string(fm) + " stopped at t=" + sci(t.final_state().t);
    }
    feasible_ok += ok;
  }
  for (int k = 0; k < 5; ++k) {
    const int m = 2 + k % 2, n = 2 + k / 2;
    const PatternComplex cx = builtin_torus_grid(m, n);
    const Pattern p = fixtures::random_theta_pattern(rng, cx, PatternType::type_110());
    Eigen::VectorXd khat = curvature_vector(p, fixtures::random_u(rng, m * n));
    // Inflate a random nonempty subset past its bound 2 pi |E'|.
    std::vector<int> faces;
    while (faces.empty()) {
      for (int f = 0; f < m * n; ++f) {
        if (std::bernoulli_distribution(0.5)(rng)) faces.push_back(f);
      }
    }
    const FaceSubset sub(faces);
    const double bound = 2 * pi * static_cast<double>(edge_neighborhood(cx, sub).size());
    for (int f : faces) khat[f] = (bound + 4 * pi * static_cast<double>(faces.size())) / static_cast<double>(faces.size());
    bool ok = !check_feasibility(p, khat).feasible;
    try {
      solve_newton(p, khat);
      ok = false;
    } catch (const NonConvergenceError& e) {
      ok = ok && !e.diagnosis().empty();
    }
    for (FlowMethod fm : {FlowMethod::Ricci, FlowMethod::Calabi}) {
      const Trajectory t = run_flow(p, khat, constant(m * n, -1.0), {.method = fm, .t_max = kC8InfeasibleTMax});
      ok = ok && !t.converged() && !t.diagnosis.empty();
    }
    infeasible_ok += ok;
  }
  return {feasible_ok == 20 && infeasible_ok == 5,
          "feasible converged " + std::to_string(feasible_ok) + "/20, infeasible diagnosed " +
              std::to_string(infeasible_ok) + "/5" + notes};
}

Outcome criterion9() {
  std::mt19937_64 rng(9009);
  double worst = 0.0;
  int failures = 0;
  for (int k = 0; k < 50; ++k) {
    const PatternType type = fixtures::all_types()[k % 4];
    const int m = std::uniform_int_distribution<int>(1, 4)(rng), n = std::uniform_int_distribution<int>(1, 4)(rng);
    const Pattern p = fixtures::random_theta_pattern(rng, builtin_torus_grid(m, n), type);
    const Eigen::VectorXd u = fixtures::random_u(rng, m * n, -5.0, -0.1);
    try {
      worst = std::max(worst, (solve_newton(p, curvature_vector(p, u)).u - u).lpNorm<Eigen::Infinity>());
    } catch (const NonConvergenceError&) {
      ++failures;
    }
  }
  return {worst < kC9Err && failures == 0,
          "50 states, max |u* - u| = " + sci(worst) + ", failures " + std::to_string(failures)};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion10() {
  const std::string fx = std::string(CIRCLEPAT_FIXTURE_DIR) + "/";
  const std::string golden = std::string(CIRCLEPAT_GOLDEN_DIR) + "/";
  const fs::path scratch = fs::temp_directory_path() / ("circlepat_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(scratch);
  int failures = 0, checks = 0;
  std::string first_failure;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first_failure = what;
  };

  // Exit-code table through the installed binary.
  const std::vector<std::pair<std::string, int>> table = {
      {"validate " + fx + "torus22_110.json", 0},          {"validate " + fx + "broken_theta.json", 1},
      {"validate " + fx + "missing.json", 2},               {"check " + fx + "torus22_110.json", 0},
      {"check " + fx + "torus22_110_tight.json", 1},        {"check " + fx + "torus22_001.json", 0},
      {"solve " + fx + "torus22_110.json", 0},              {"solve " + fx + "torus22_000.json", 0},
      {"solve " + fx + "torus22_110_infeasible.json", 1},   {"solve " + fx + "broken_syntax.json", 2},
      {"flow " + fx + "torus22_110_flow.json --method ricci", 0},
      {"flow " + fx + "torus22_110_flow.json --method calabi", 0},
      {"flow " + fx + "torus22_110_infeasible.json --method ricci --t-max 50", 1},
      {"report " + golden + "solve_torus22_110.result.json", 0},
      {"report " + fx + "broken_syntax.json", 2},
  };
  for (const auto& [args, code] : table) {
    const std::string cmd = std::string(CIRCLEPAT_BINARY) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    expect(WIFEXITED(status) && WEXITSTATUS(status) == code, "exit code of `" + args + "`");
  }

  // Fixture round trips.
  for (const auto& entry : fs::directory_iterator(fx)) {
    if (entry.path().filename().string().rfind("broken", 0) == 0) continue;
    const ProblemFile p = parse_problem(slurp(entry.path()));
    const std::string printed = print_problem(p);
    expect(parse_problem(printed) == p && print_problem(parse_problem(printed)) == printed,
           "round trip of " + entry.path().filename().string());
  }

  // Golden reports and self-consistency of every emitted result.
  for (const char* stem : {"solve_torus22_110", "flow_torus22_110_ricci", "flow_torus33_110_calabi"}) {
    std::ostringstream out, err;
    expect(cli::cmd_report(golden + stem + ".result.json", out, err) == 0 &&
               out.str() == slurp(golden + stem + ".report.txt"),
           std::string("golden report ") + stem);
  }
  for (const char* name : {"torus22_110.json", "torus22_000.json", "torus22_001.json", "torus22_00m1.json",
                           "torus33_110_flow.json", "torus22_110_flow.json", "torus22_110_infeasible.json"}) {
    for (bool flow : {false, true}) {
      const std::string out_path = (scratch / "r.json").string();
      fs::remove(out_path);
      std::ostringstream out, err;
      if (flow) {
        cli::cmd_flow(fx + name, {.out = out_path}, out, err);
      } else {
        cli::cmd_solve(fx + name, {.out = out_path, .skip_check = true}, out, err);
      }
      if (!fs::exists(out_path)) continue;
      const ResultFile res = parse_result(slurp(out_path));
      expect(result_consistency_error(res) <= kC10SelfCheck, std::string("self-consistency of ") + name);
    }
  }
  fs::remove_all(scratch);
  return {failures == 0, std::to_string(checks - failures) + "/" + std::to_string(checks) + " checks" +
                             (failures ? ", first failure: " + first_failure : "")};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  struct Entry {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Entry criteria[] = {
      {1, "symmetric (1,1,0) torus solution", criterion1},
      {2, "(0,0,delta) closed form and two-step Newton", criterion2},
      {3, "Jacobian against finite differences", criterion3},
      {4, "angle limits at the boundary of U", criterion4},
      {5, "flow convergence and monotonicity", criterion5},
      {6, "exact linear ODE for (0,0,0)", criterion6},
      {7, "max-flow agrees with exhaustive enumeration", criterion7},
      {8, "feasible targets converge, infeasible ones drift", criterion8},
      {9, "rigidity: K(u) determines u", criterion9},
      {10, "command-line contract", criterion10},
  };
  int failed = 0;
  for (const Entry& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  [%2d] %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
