#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "circlepat/pattern.hpp"

namespace circlepat {

struct SolveOptions {
  double tol_residual = 1e-10;  // sup-norm of K - khat
  int max_iter = 100;
  double backtrack = 0.5;
  double armijo = 1e-4;
  double domain_margin = 0.9;  // fraction of the step to the boundary u = 0

  // Throws std::invalid_argument if a field is out of range.
  void check() const;

  friend bool operator==(const SolveOptions&, const SolveOptions&) = default;
};

// Faces whose coordinate is heading for one of the two pieces of the boundary
// of U: u_i -> 0 or u_i -> -inf.
struct BoundaryDiagnosis {
  std::vector<int> toward_zero;
  std::vector<int> toward_neg_infinity;

  bool empty() const { return toward_zero.empty() && toward_neg_infinity.empty(); }
  std::string describe() const;
};

// Compares an earlier and a later iterate of a failed run. A face heads to
// -inf when |u| grew by more than 5% (or passed 1e6) while decreasing, and to
// 0 when |u| at least halved (or fell below 1e-8) while increasing.
BoundaryDiagnosis diagnose_boundary(const Eigen::VectorXd& earlier, const Eigen::VectorXd& later);

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double residual_sup, int iterations,
                      Eigen::VectorXd last_u, BoundaryDiagnosis diagnosis);

  double residual_sup() const { return residual_sup_; }
  int iterations() const { return iterations_; }
  const Eigen::VectorXd& last_u() const { return last_u_; }
  const BoundaryDiagnosis& diagnosis() const { return diagnosis_; }

 private:
  double residual_sup_;
  int iterations_;
  Eigen::VectorXd last_u_;
  BoundaryDiagnosis diagnosis_;
};

struct NewtonResult {
  Eigen::VectorXd u;
  int iterations = 0;
  int gradient_steps = 0;  // iterations where the Cholesky factorization failed
  double residual_sup = 0.0;
};

// Newton's method on the strictly convex Ricci energy: the step solves
// Laplace * d = khat - K, is shortened to stay inside U, and is backtracked
// until ||K - khat||^2 satisfies the Armijo condition. Starts from
// `initial`, or from (-1, ..., -1).
// Throws NonConvergenceError when max_iter is exhausted or the line search
// stalls; infeasible (1,1,0) targets end this way.
NewtonResult solve_newton(const Pattern& pattern, const Eigen::VectorXd& khat,
                          const SolveOptions& opts = {},
                          const std::optional<Eigen::VectorXd>& initial = std::nullopt);

// For the (0,0,delta) family K_i = -u_i * sum_{incidences of i} s(theta), so
// u_i = -khat_i / sum s(theta). Throws DomainError for (1,1,0) and
// std::invalid_argument for a nonpositive target.
Eigen::VectorXd closed_form_solve_00d(const Pattern& pattern, const Eigen::VectorXd& khat);

enum class FlowMethod { Ricci, Calabi };
enum class Integrator { RK4, Euler };
enum class Termination { Converged, TMax, StepUnderflow };

std::string to_string(FlowMethod m);
std::string to_string(Integrator i);
std::string to_string(Termination t);

struct FlowOptions {
  FlowMethod method = FlowMethod::Ricci;
  Integrator integrator = Integrator::RK4;
  double dt = 0.1;
  double t_max = 100.0;
  double tol_residual = 1e-10;
  int sample_every = 1;
  // Halve the step whenever it leaves U or raises either energy.
  bool adapt = true;
  double min_dt = 1e-12;

  void check() const;

  friend bool operator==(const FlowOptions&, const FlowOptions&) = default;
};

struct Snapshot {
  double t = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd K;
  double energy = 0.0;  // Ricci energy
  double calabi = 0.0;
  double residual_sup = 0.0;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;  // first is t = 0, last is the final state
  Termination termination = Termination::TMax;
  int accepted_steps = 0;
  int rejected_steps = 0;
  double final_dt = 0.0;
  BoundaryDiagnosis diagnosis;  // filled when not converged

  bool converged() const { return termination == Termination::Converged; }
  const Snapshot& final_state() const { return snapshots.back(); }
};

// du/dt = K - khat (Ricci) or -Laplace (K - khat) (Calabi).
Eigen::VectorXd flow_velocity(const Pattern& pattern, const Eigen::VectorXd& khat,
                              const Eigen::VectorXd& u, FlowMethod method);

// dr/dt recovered from du/dt through r = -ln(-u/2):
// dr_i/dt = v_i (e^{r_i}/2 - epsilon delta e^{-r_i}/2).
Eigen::VectorXd radius_velocity(PatternType type, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& du_dt);

Trajectory ricci_flow(const Pattern& pattern, const Eigen::VectorXd& khat,
                      const Eigen::VectorXd& u0, FlowOptions opts = {});
Trajectory calabi_flow(const Pattern& pattern, const Eigen::VectorXd& khat,
                       const Eigen::VectorXd& u0, FlowOptions opts = {});
// Dispatches on opts.method.
Trajectory run_flow(const Pattern& pattern, const Eigen::VectorXd& khat,
                    const Eigen::VectorXd& u0, const FlowOptions& opts);

// Least-squares slope of ln C(t) over the final decade of decay (the trailing
// snapshots with C <= 10 C_final, at least three). NaN when fewer than two
// usable samples exist.
double fitted_log_calabi_rate(const Trajectory& trajectory);

}  // namespace circlepat
