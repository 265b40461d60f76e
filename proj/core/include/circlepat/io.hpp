#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "circlepat/pattern.hpp"
#include "circlepat/solve.hpp"

namespace circlepat {

inline constexpr std::string_view kProblemFormat = "circlepat-problem/1";
inline constexpr std::string_view kResultFormat = "circlepat-result/1";

// A problem document: the pattern, the target curvature, an optional initial
// point and the solver/flow settings. Indices are 0-based throughout.
struct ProblemFile {
  Pattern pattern;
  Eigen::VectorXd khat;
  std::optional<Eigen::VectorXd> initial_u;
  // Vertex labels are carried through untouched; nothing uses them.
  std::vector<std::string> vertex_labels;
  SolveOptions solve;
  FlowOptions flow;
};

bool operator==(const ProblemFile& a, const ProblemFile& b);

struct ParseIssue {
  std::string location;  // "line L, column C" or a JSON pointer such as /edges/3/theta
  std::string message;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<ParseIssue> issues);
  const std::vector<ParseIssue>& issues() const { return issues_; }

 private:
  std::vector<ParseIssue> issues_;
};

// Throws ParseError listing every problem found: syntax, schema, complex
// invariants, theta outside its interval, nonpositive targets.
ProblemFile parse_problem(std::string_view text);
std::string print_problem(const ProblemFile& problem);

// FNV-1a 64 of the canonical printed problem, as 16 hex digits.
std::string problem_hash(const ProblemFile& problem);

struct TrajectoryRow {
  double t = 0.0;
  double residual_sup = 0.0;
  double energy = 0.0;
  double calabi = 0.0;
};

struct ResultFile {
  std::string problem_hash{};
  ProblemFile problem;
  std::string command{};  // "solve" or "flow"
  std::string method{};   // "closed_form", "newton", "ricci" or "calabi"
  bool converged = false;
  std::string termination{};
  int iterations = 0;
  double wall_time_s = 0.0;

  Eigen::VectorXd u{};
  Eigen::VectorXd r{};  // r_i = -ln(-u_i / 2)
  Eigen::VectorXd K{};
  std::vector<double> beta{};    // 2*edge + slot
  std::vector<double> length{};  // per edge
  double residual_sup = 0.0;
  double residual_l2 = 0.0;

  std::vector<int> toward_zero{};
  std::vector<int> toward_neg_infinity{};

  // Flow runs only.
  std::vector<TrajectoryRow> trajectory{};
  std::optional<Eigen::VectorXd> radius_velocity{};
  std::optional<double> fitted_log_calabi_rate{};
};

// Fills every derived field (r, K, beta, length, residuals) from u.
ResultFile make_result(const ProblemFile& problem, const Eigen::VectorXd& u);

std::string print_result(const ResultFile& result);
// Throws ParseError.
ResultFile parse_result(std::string_view text);

// max_i |K_i(u) - K_i(stored)| after recomputing from the stored u.
double result_consistency_error(const ResultFile& result);

}  // namespace circlepat
