#include "circlepat/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "circlepat/curvature.hpp"
#include "circlepat/errors.hpp"

namespace circlepat {
namespace {

double sup_norm(const Eigen::VectorXd& v) { return v.lpNorm<Eigen::Infinity>(); }

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

// Largest alpha in (0, 1] keeping u + alpha d a fixed fraction away from u = 0.
double domain_step_limit(const Eigen::VectorXd& u, const Eigen::VectorXd& d, double margin) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (d[i] > 0.0 && u[i] + d[i] >= 0.0) alpha = std::min(alpha, margin * (-u[i]) / d[i]);
  }
  return alpha;
}

}  // namespace

void SolveOptions::check() const {
  if (!(tol_residual > 0.0)) throw std::invalid_argument("tol_residual must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  for (double f : {backtrack, armijo, domain_margin}) {
    if (!(f > 0.0 && f < 1.0)) {
      throw std::invalid_argument("line-search factors must lie in (0, 1)");
    }
  }
}

void FlowOptions::check() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  if (!(tol_residual > 0.0)) throw std::invalid_argument("tol_residual must be positive");
  if (sample_every < 1) throw std::invalid_argument("sample_every must be at least 1");
  if (!(min_dt > 0.0)) throw std::invalid_argument("min_dt must be positive");
}

std::string BoundaryDiagnosis::describe() const {
  if (empty()) return "no face is approaching the boundary of U";
  std::string s;
  if (!toward_neg_infinity.empty()) s += "u -> -inf at faces {" + join(toward_neg_infinity) + "}";
  if (!toward_zero.empty()) {
    if (!s.empty()) s += "; ";
    s += "u -> 0 at faces {" + join(toward_zero) + "}";
  }
  return s;
}

BoundaryDiagnosis diagnose_boundary(const Eigen::VectorXd& earlier, const Eigen::VectorXd& later) {
  BoundaryDiagnosis d;
  for (Eigen::Index i = 0; i < later.size(); ++i) {
    const double a = earlier[i];
    const double b = later[i];
    if (!std::isfinite(b) || b < -1e6 || (b < a && std::abs(b) > 1.05 * std::abs(a))) {
      d.toward_neg_infinity.push_back(static_cast<int>(i));
    } else if (b > -1e-8 || (b > a && std::abs(b) <= 0.5 * std::abs(a))) {
      d.toward_zero.push_back(static_cast<int>(i));
    }
  }
  return d;
}

NonConvergenceError::NonConvergenceError(const std::string& what, double residual_sup,
                                         int iterations, Eigen::VectorXd last_u,
                                         BoundaryDiagnosis diagnosis)
    : std::runtime_error(what),
      residual_sup_(residual_sup),
      iterations_(iterations),
      last_u_(std::move(last_u)),
      diagnosis_(std::move(diagnosis)) {}

NewtonResult solve_newton(const Pattern& pattern, const Eigen::VectorXd& khat,
                          const SolveOptions& opts, const std::optional<Eigen::VectorXd>& initial) {
  opts.check();
  const int n = pattern.face_count();
  if (khat.size() != n) throw std::invalid_argument("target length does not match face count");

  Eigen::VectorXd u = initial ? *initial : energy_reference_point(n);
  check_admissible(u, n);

  std::vector<Eigen::VectorXd> history{u};
  NewtonResult out;
  Eigen::VectorXd r = curvature_vector(pattern, u) - khat;

  auto fail = [&](const std::string& why, int it) -> NonConvergenceError {
    const Eigen::VectorXd& earlier = history[history.size() / 2];
    BoundaryDiagnosis diag = diagnose_boundary(earlier, u);
    std::ostringstream os;
    os.precision(6);
    os << "Newton did not converge after " << it << " iterations (" << why
       << "); residual " << sup_norm(r) << "; " << diag.describe();
    return NonConvergenceError(os.str(), sup_norm(r), it, u, std::move(diag));
  };

  for (int it = 0;; ++it) {
    const double res = sup_norm(r);
    if (res <= opts.tol_residual) {
      out.u = u;
      out.iterations = it;
      out.residual_sup = res;
      return out;
    }
    if (it == opts.max_iter) throw fail("iteration limit", it);

    const LaplaceMatrix lap = laplacian(pattern, u);
    Eigen::VectorXd d;
    if (auto step = lap.solve(-r)) {
      d = std::move(*step);
    } else {
      d = r;
      ++out.gradient_steps;
    }
    // d/dalpha ||r(u + alpha d)||^2 at alpha = 0.
    double slope = 2.0 * r.dot(lap * d);
    if (!(slope < 0.0)) {
      d = r;
      slope = 2.0 * r.dot(lap * d);
      ++out.gradient_steps;
    }

    const double phi0 = r.squaredNorm();
    double alpha = domain_step_limit(u, d, opts.domain_margin);
    bool accepted = false;
    Eigen::VectorXd u_try;
    Eigen::VectorXd r_try;
    while (alpha > 1e-20) {
      u_try = u + alpha * d;
      if (is_admissible(u_try)) {
        r_try = curvature_vector(pattern, u_try) - khat;
        const double phi = r_try.squaredNorm();
        if (std::isfinite(phi) && phi <= phi0 + opts.armijo * alpha * slope) {
          accepted = true;
          break;
        }
      }
      alpha *= opts.backtrack;
    }
    if (!accepted) throw fail("line search stalled", it);
    u = std::move(u_try);
    r = std::move(r_try);
    history.push_back(u);
  }
}

Eigen::VectorXd closed_form_solve_00d(const Pattern& pattern, const Eigen::VectorXd& khat) {
  if (!pattern.type().linear()) {
    throw DomainError("closed-form solve applies only to (0,0,delta) patterns, not " +
                      pattern.type().name());
  }
  const int n = pattern.face_count();
  if (khat.size() != n) throw std::invalid_argument("target length does not match face count");
  Eigen::VectorXd u(n);
  for (int f = 0; f < n; ++f) {
    if (!(khat[f] > 0.0)) {
      throw std::invalid_argument("target curvature must be positive at face " +
                                  std::to_string(f));
    }
    double sum_s = 0.0;
    for (const Incidence& inc : pattern.complex().incidences(f)) {
      sum_s += s_factor(pattern.type().delta(), pattern.theta(inc.edge));
    }
    u[f] = -khat[f] / sum_s;
  }
  return u;
}

std::string to_string(FlowMethod m) { return m == FlowMethod::Ricci ? "ricci" : "calabi"; }
std::string to_string(Integrator i) { return i == Integrator::RK4 ? "rk4" : "euler"; }
std::string to_string(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "converged";
    case Termination::TMax:
      return "t_max";
    default:
      return "step_underflow";
  }
}

Eigen::VectorXd flow_velocity(const Pattern& pattern, const Eigen::VectorXd& khat,
                              const Eigen::VectorXd& u, FlowMethod method) {
  Eigen::VectorXd r = curvature_vector(pattern, u) - khat;
  if (method == FlowMethod::Ricci) return r;
  return -(laplacian(pattern, u) * r);
}

Eigen::VectorXd radius_velocity(PatternType type, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& du_dt) {
  const double ed = static_cast<double>(type.epsilon() * type.delta());
  Eigen::VectorXd out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double r = radius_from_u(u[i]);
    out[i] = du_dt[i] * (0.5 * std::exp(r) - 0.5 * ed * std::exp(-r));
  }
  return out;
}

namespace {

// One integrator step; nullopt if a stage leaves U.
std::optional<Eigen::VectorXd> integrate_step(const Pattern& pattern, const Eigen::VectorXd& khat,
                                              const Eigen::VectorXd& u, double h,
                                              const FlowOptions& opts) {
  auto rhs = [&](const Eigen::VectorXd& x) { return flow_velocity(pattern, khat, x, opts.method); };
  if (opts.integrator == Integrator::Euler) {
    Eigen::VectorXd next = u + h * rhs(u);
    if (!is_admissible(next)) return std::nullopt;
    return next;
  }
  const Eigen::VectorXd k1 = rhs(u);
  Eigen::VectorXd stage = u + 0.5 * h * k1;
  if (!is_admissible(stage)) return std::nullopt;
  const Eigen::VectorXd k2 = rhs(stage);
  stage = u + 0.5 * h * k2;
  if (!is_admissible(stage)) return std::nullopt;
  const Eigen::VectorXd k3 = rhs(stage);
  stage = u + h * k3;
  if (!is_admissible(stage)) return std::nullopt;
  const Eigen::VectorXd k4 = rhs(stage);
  Eigen::VectorXd next = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!is_admissible(next)) return std::nullopt;
  return next;
}

Snapshot make_snapshot(double t, Eigen::VectorXd u, Eigen::VectorXd K, double energy,
                       const Eigen::VectorXd& khat) {
  Snapshot s;
  s.t = t;
  s.residual_sup = sup_norm(K - khat);
  s.calabi = calabi_energy(K, khat);
  s.u = std::move(u);
  s.K = std::move(K);
  s.energy = energy;
  return s;
}

}  // namespace

Trajectory run_flow(const Pattern& pattern, const Eigen::VectorXd& khat,
                    const Eigen::VectorXd& u0, const FlowOptions& opts) {
  opts.check();
  const int n = pattern.face_count();
  if (khat.size() != n) throw std::invalid_argument("target length does not match face count");
  check_admissible(u0, n);

  Trajectory traj;
  Snapshot cur = make_snapshot(0.0, u0, curvature_vector(pattern, u0),
                               ricci_energy_value(pattern, u0, khat), khat);
  traj.snapshots.push_back(cur);
  bool last_recorded = true;

  double dt = opts.dt;
  if (cur.residual_sup <= opts.tol_residual) {
    traj.termination = Termination::Converged;
  } else {
    traj.termination = Termination::TMax;
    while (cur.t < opts.t_max) {
      const double remaining = opts.t_max - cur.t;
      const bool final_step = dt >= remaining;
      const double h = final_step ? remaining : dt;

      auto next = integrate_step(pattern, khat, cur.u, h, opts);
      bool reject = !next.has_value();
      Eigen::VectorXd K_next;
      double dE = 0.0;
      double C_next = 0.0;
      if (!reject) {
        K_next = curvature_vector(pattern, *next);
        C_next = calabi_energy(K_next, khat);
        dE = ricci_energy_difference(pattern, cur.u, *next, khat);
        if (!std::isfinite(C_next) || !std::isfinite(dE)) {
          reject = true;
        } else if (opts.adapt) {
          const bool energy_up = dE > 1e-12 * (1.0 + std::abs(cur.energy));
          const bool calabi_up = C_next - cur.calabi > 1e-12 * (1.0 + cur.calabi);
          reject = energy_up || calabi_up;
        }
      }
      if (reject) {
        ++traj.rejected_steps;
        dt = 0.5 * std::min(dt, h);
        if (dt < opts.min_dt) {
          traj.termination = Termination::StepUnderflow;
          break;
        }
        continue;
      }

      const double t_next = final_step ? opts.t_max : cur.t + h;
      cur = make_snapshot(t_next, std::move(*next), std::move(K_next), cur.energy + dE, khat);
      ++traj.accepted_steps;
      const bool done = cur.residual_sup <= opts.tol_residual;
      last_recorded = done || traj.accepted_steps % opts.sample_every == 0;
      if (last_recorded) traj.snapshots.push_back(cur);
      if (done) {
        traj.termination = Termination::Converged;
        break;
      }
    }
  }
  if (!last_recorded) traj.snapshots.push_back(cur);
  traj.final_dt = dt;

  if (!traj.converged()) {
    const double t_half = 0.5 * traj.final_state().t;
    auto it = std::find_if(traj.snapshots.begin(), traj.snapshots.end(),
                           [&](const Snapshot& s) { return s.t >= t_half; });
    traj.diagnosis = diagnose_boundary(it->u, traj.final_state().u);
  }
  return traj;
}

Trajectory ricci_flow(const Pattern& pattern, const Eigen::VectorXd& khat,
                      const Eigen::VectorXd& u0, FlowOptions opts) {
  opts.method = FlowMethod::Ricci;
  return run_flow(pattern, khat, u0, opts);
}

Trajectory calabi_flow(const Pattern& pattern, const Eigen::VectorXd& khat,
                       const Eigen::VectorXd& u0, FlowOptions opts) {
  opts.method = FlowMethod::Calabi;
  return run_flow(pattern, khat, u0, opts);
}

double fitted_log_calabi_rate(const Trajectory& trajectory) {
  std::vector<std::pair<double, double>> pts;
  for (const Snapshot& s : trajectory.snapshots) {
    if (s.calabi > 0.0 && std::isfinite(s.calabi)) pts.emplace_back(s.t, std::log(s.calabi));
  }
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();

  const double cutoff = pts.back().second + std::log(10.0);
  std::size_t first = pts.size() - 1;
  while (first > 0 && (pts[first - 1].second <= cutoff || pts.size() - first < 3)) --first;

  const double m = static_cast<double>(pts.size() - first);
  double st = 0.0, sy = 0.0;
  for (std::size_t i = first; i < pts.size(); ++i) {
    st += pts[i].first;
    sy += pts[i].second;
  }
  const double tbar = st / m, ybar = sy / m;
  double num = 0.0, den = 0.0;
  for (std::size_t i = first; i < pts.size(); ++i) {
    num += (pts[i].first - tbar) * (pts[i].second - ybar);
    den += (pts[i].first - tbar) * (pts[i].first - tbar);
  }
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace circlepat
