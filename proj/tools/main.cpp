#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("circlepat");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("CIRCLEPAT_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace circlepat;
  using namespace circlepat::cli;
  setup_logging();

  CLI::App app{"circlepat: generalized hyperbolic circle patterns"};
  app.require_subcommand(1);

  std::string path;

  auto* validate = app.add_subcommand("validate", "Parse and validate a problem file");
  validate->add_option("problem", path, "Problem file")->required();

  auto* check = app.add_subcommand("check", "Feasibility of the target curvature");
  check->add_option("problem", path, "Problem file")->required();

  SolveFlags sf;
  auto* solve = app.add_subcommand("solve", "Closed form or Newton solve");
  solve->add_option("problem", path, "Problem file")->required();
  solve->add_option("--tol", sf.tol, "Sup-norm residual tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", sf.max_iter, "Newton iteration limit")->check(CLI::PositiveNumber);
  solve->add_option("--out", sf.out, "Result file (default: standard output)");
  solve->add_flag("--skip-check", sf.skip_check, "Skip the feasibility pre-check");

  FlowFlags ff;
  const std::map<std::string, FlowMethod> methods{{"ricci", FlowMethod::Ricci},
                                                  {"calabi", FlowMethod::Calabi}};
  const std::map<std::string, Integrator> integrators{{"rk4", Integrator::RK4},
                                                      {"euler", Integrator::Euler}};
  auto* flow = app.add_subcommand("flow", "Integrate the Ricci or Calabi flow");
  flow->add_option("problem", path, "Problem file")->required();
  flow->add_option("--method", ff.method, "ricci or calabi")
      ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
  flow->add_option("--integrator", ff.integrator, "rk4 or euler")
      ->transform(CLI::CheckedTransformer(integrators, CLI::ignore_case));
  flow->add_option("--dt", ff.dt, "Initial step")->check(CLI::PositiveNumber);
  flow->add_option("--t-max", ff.t_max, "Integration horizon")->check(CLI::PositiveNumber);
  flow->add_option("--tol", ff.tol, "Sup-norm residual tolerance")->check(CLI::PositiveNumber);
  flow->add_option("--sample-every", ff.sample_every, "Record every n-th accepted step")
      ->check(CLI::PositiveNumber);
  flow->add_option("--out", ff.out, "Result file (default: standard output)");

  auto* report = app.add_subcommand("report", "Summarize a result file");
  report->add_option("result", path, "Result file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (*validate) return cmd_validate(path, std::cout, std::cerr);
    if (*check) return cmd_check(path, std::cout, std::cerr);
    if (*solve) return cmd_solve(path, sf, std::cout, std::cerr);
    if (*flow) return cmd_flow(path, ff, std::cout, std::cerr);
    if (*report) return cmd_report(path, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitIo;
}
