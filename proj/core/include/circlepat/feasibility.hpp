#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "circlepat/complex.hpp"
#include "circlepat/pattern.hpp"

namespace circlepat {

// A face subset F' with its edge neighbourhood E' and the two sides of the
// inequality that must hold strictly, lhs < rhs. For the subset condition
// lhs = sum of khat over F' and rhs = 2 pi |E'|; for positivity lhs = 0 and
// rhs = khat_i.
struct Witness {
  FaceSubset faces;
  std::vector<int> edges;
  double lhs = 0.0;
  double rhs = 0.0;

  double slack() const { return rhs - lhs; }
};

struct FeasibilityReport {
  enum class Method { Positivity, Exhaustive, MaxFlow };

  bool feasible = false;
  // The tightest constraint is within floating-point reach of equality. A
  // marginal report is never feasible for the max-flow method and the CLI
  // treats it as infeasible for every method.
  bool marginal = false;
  Method method = Method::Positivity;
  // Always present when infeasible. Exhaustive reports always carry the
  // worst subset.
  std::optional<Witness> witness;
};

std::string to_string(FeasibilityReport::Method m);

// Largest |F| accepted by check_exhaustive.
inline constexpr int kExhaustiveFaceLimit = 24;

// Relative and absolute perturbations used to decide strictness.
inline constexpr double kStrictRelative = 0x1p-40;

FeasibilityReport check_positivity(const Eigen::VectorXd& khat);

// Enumerates all nonempty subsets in Gray-code order. Throws SizeError when
// |F| exceeds kExhaustiveFaceLimit.
FeasibilityReport check_exhaustive(const PatternComplex& complex, const Eigen::VectorXd& khat);

// Transportation network source -> face (khat_i) -> incident edge (inf) ->
// sink (2 pi). The non-strict condition holds iff the max flow saturates the
// source; strictness is decided by re-solving with every face capacity
// raised to khat_i (1 + 2^-40) + 2^-40 max khat.
FeasibilityReport check_maxflow(const PatternComplex& complex, const Eigen::VectorXd& khat);

// Positivity for (0,0,delta); positivity then the max-flow test for (1,1,0).
FeasibilityReport check_feasibility(const Pattern& pattern, const Eigen::VectorXd& khat);

}  // namespace circlepat
