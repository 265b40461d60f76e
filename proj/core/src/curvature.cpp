#include "circlepat/curvature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "circlepat/errors.hpp"

namespace circlepat {
namespace {

UPair edge_u(const Edge& e, const Eigen::VectorXd& u) { return {u[e.face_a], u[e.face_b]}; }

void check_target(const Pattern& pattern, const Eigen::VectorXd& khat) {
  if (khat.size() != pattern.face_count()) {
    throw std::invalid_argument("target has " + std::to_string(khat.size()) +
                                " entries for " + std::to_string(pattern.face_count()) +
                                " faces");
  }
}

// sum_e 2 E_e(u_a, u_b) with E_e = (s/4)(u_a^2 + u_b^2), differenced between
// two points without forming either value.
double linear_energy_difference(const Pattern& pattern, const Eigen::VectorXd& from,
                                const Eigen::VectorXd& to) {
  double sum = 0.0;
  for (const Edge& e : pattern.complex().edges()) {
    const double s = s_factor(pattern.type().delta(), pattern.theta(e.id));
    const double da = (to[e.face_a] - from[e.face_a]) * (to[e.face_a] + from[e.face_a]);
    const double db = (to[e.face_b] - from[e.face_b]) * (to[e.face_b] + from[e.face_b]);
    sum += 0.5 * s * (da + db);
  }
  return sum;
}

}  // namespace

Eigen::VectorXd curvature_vector(const Pattern& pattern, const Eigen::VectorXd& u) {
  check_admissible(u, pattern.face_count());
  Eigen::VectorXd K = Eigen::VectorXd::Zero(pattern.face_count());
  for (const Edge& e : pattern.complex().edges()) {
    const AnglePair b = edge_angles(pattern.type(), pattern.theta(e.id), edge_u(e, u));
    K[e.face_a] += 2.0 * b.beta1;
    K[e.face_b] += 2.0 * b.beta2;
  }
  return K;
}

CurvatureReport curvature(const Pattern& pattern, const Eigen::VectorXd& u) {
  check_admissible(u, pattern.face_count());
  CurvatureReport rep;
  rep.K = Eigen::VectorXd::Zero(pattern.face_count());
  rep.beta.resize(2 * static_cast<std::size_t>(pattern.edge_count()));
  rep.length.resize(static_cast<std::size_t>(pattern.edge_count()));
  for (const Edge& e : pattern.complex().edges()) {
    const UPair ue = edge_u(e, u);
    const AnglePair b = edge_angles(pattern.type(), pattern.theta(e.id), ue);
    rep.K[e.face_a] += 2.0 * b.beta1;
    rep.K[e.face_b] += 2.0 * b.beta2;
    rep.beta[2 * e.id] = b.beta1;
    rep.beta[2 * e.id + 1] = b.beta2;
    rep.length[e.id] = edge_length(pattern.type(), pattern.theta(e.id), ue);
  }
  return rep;
}

CurvatureReport curvature(const Pattern& pattern, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& khat) {
  check_target(pattern, khat);
  CurvatureReport rep = curvature(pattern, u);
  rep.residual = rep.K - khat;
  rep.residual_sup = rep.residual.lpNorm<Eigen::Infinity>();
  rep.residual_l2 = rep.residual.norm();
  return rep;
}

LaplaceMatrix::LaplaceMatrix(Eigen::SparseMatrix<double> m) : m_(std::move(m)) {
  m_.makeCompressed();
}

std::optional<Eigen::VectorXd> LaplaceMatrix::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x;
  if (size() <= kDenseLimit) {
    const Eigen::MatrixXd neg = -dense();
    Eigen::LLT<Eigen::MatrixXd> llt(neg);
    if (llt.info() != Eigen::Success) return std::nullopt;
    x = -llt.solve(rhs);
  } else {
    const Eigen::SparseMatrix<double> neg = -m_;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(neg);
    if (llt.info() != Eigen::Success) return std::nullopt;
    x = -llt.solve(rhs);
  }
  if (!x.allFinite()) return std::nullopt;
  return x;
}

bool LaplaceMatrix::negative_definite() const {
  if (size() <= kDenseLimit) {
    return Eigen::LLT<Eigen::MatrixXd>(-dense()).info() == Eigen::Success;
  }
  const Eigen::SparseMatrix<double> neg = -m_;
  return Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>(neg).info() == Eigen::Success;
}

LaplaceMatrix laplacian(const Pattern& pattern, const Eigen::VectorXd& u) {
  check_admissible(u, pattern.face_count());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(4 * static_cast<std::size_t>(pattern.edge_count()));
  for (const Edge& e : pattern.complex().edges()) {
    const Eigen::Matrix2d p = edge_partials(pattern.type(), pattern.theta(e.id), edge_u(e, u));
    trips.emplace_back(e.face_a, e.face_a, 2.0 * p(0, 0));
    trips.emplace_back(e.face_a, e.face_b, 2.0 * p(0, 1));
    trips.emplace_back(e.face_b, e.face_a, 2.0 * p(1, 0));
    trips.emplace_back(e.face_b, e.face_b, 2.0 * p(1, 1));
  }
  Eigen::SparseMatrix<double> m(pattern.face_count(), pattern.face_count());
  m.setFromTriplets(trips.begin(), trips.end());
  return LaplaceMatrix(std::move(m));
}

Eigen::VectorXd energy_reference_point(int face_count) {
  return Eigen::VectorXd::Constant(face_count, -1.0);
}

Eigen::VectorXd ricci_energy_gradient(const Pattern& pattern, const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& khat) {
  check_target(pattern, khat);
  return khat - curvature_vector(pattern, u);
}

double ricci_energy_difference(const Pattern& pattern, const Eigen::VectorXd& from,
                               const Eigen::VectorXd& to, const Eigen::VectorXd& khat) {
  check_target(pattern, khat);
  check_admissible(from, pattern.face_count());
  check_admissible(to, pattern.face_count());
  const Eigen::VectorXd d = to - from;
  const double linear_part = khat.dot(d);
  if (pattern.type().linear()) {
    return linear_energy_difference(pattern, from, to) + linear_part;
  }
  if (d.lpNorm<Eigen::Infinity>() == 0.0) return 0.0;

  // Integrate -K(from + s d) . d over s in [0, 1]; U is convex so the
  // segment stays admissible.
  auto integrand = [&](double s) {
    const Eigen::VectorXd p = from + s * d;
    return -curvature_vector(pattern, p).dot(d);
  };
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 15>;
  const double integral = Quadrature::integrate(integrand, 0.0, 1.0, 15, 1e-13);
  return integral + linear_part;
}

double ricci_energy_value(const Pattern& pattern, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& khat) {
  const Eigen::VectorXd ref = energy_reference_point(pattern.face_count());
  return khat.dot(ref) + ricci_energy_difference(pattern, ref, u, khat);
}

double calabi_energy(const Eigen::VectorXd& K, const Eigen::VectorXd& khat) {
  if (K.size() != khat.size()) {
    throw std::invalid_argument("calabi_energy: K has " + std::to_string(K.size()) +
                                " entries, khat has " + std::to_string(khat.size()));
  }
  return 0.5 * (K - khat).squaredNorm();
}

}  // namespace circlepat
