#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "circlepat/solve.hpp"

namespace circlepat::cli {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMath = 1;  // infeasible, marginal or nonconverged
inline constexpr int kExitIo = 2;    // unreadable file, malformed document, bad flag

struct SolveFlags {
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<std::string> out;
  bool skip_check = false;
};

struct FlowFlags {
  std::optional<FlowMethod> method;
  std::optional<Integrator> integrator;
  std::optional<double> dt;
  std::optional<double> t_max;
  std::optional<double> tol;
  std::optional<int> sample_every;
  std::optional<std::string> out;
};

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_check(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_solve(const std::string& path, const SolveFlags& flags, std::ostream& out,
              std::ostream& err);
int cmd_flow(const std::string& path, const FlowFlags& flags, std::ostream& out,
             std::ostream& err);
int cmd_report(const std::string& path, std::ostream& out, std::ostream& err);

}  // namespace circlepat::cli
