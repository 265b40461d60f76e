#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "circlepat/pattern.hpp"

namespace circlepat {

struct CurvatureReport {
  Eigen::VectorXd K;
  // beta[2*e + slot] is the angle at edge e on the side of face_a (slot 0)
  // or face_b (slot 1).
  std::vector<double> beta;
  // Generalized edge lengths; may be negative for the (0,0,delta) family.
  std::vector<double> length;
  // K - khat. Empty when no target was supplied.
  Eigen::VectorXd residual;
  double residual_sup = 0.0;
  double residual_l2 = 0.0;
};

// K_i = sum over incidences of face i of 2 beta. Edges are visited in
// ascending id so the sums are reproducible.
Eigen::VectorXd curvature_vector(const Pattern& pattern, const Eigen::VectorXd& u);
CurvatureReport curvature(const Pattern& pattern, const Eigen::VectorXd& u);
CurvatureReport curvature(const Pattern& pattern, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& khat);

// The Jacobian dK/du. Symmetric, and negative definite on the admissible space.
class LaplaceMatrix {
 public:
  // Problems up to this many faces are factorized densely.
  static constexpr int kDenseLimit = 64;

  explicit LaplaceMatrix(Eigen::SparseMatrix<double> m);

  int size() const { return static_cast<int>(m_.rows()); }
  const Eigen::SparseMatrix<double>& sparse() const { return m_; }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(m_); }
  double coeff(int i, int j) const { return m_.coeff(i, j); }

  Eigen::VectorXd operator*(const Eigen::VectorXd& v) const { return m_ * v; }

  // Solves (Laplace) x = rhs through a Cholesky factorization of -Laplace.
  // Returns nullopt when the factorization fails (numerically indefinite).
  std::optional<Eigen::VectorXd> solve(const Eigen::VectorXd& rhs) const;

  bool negative_definite() const;

 private:
  Eigen::SparseMatrix<double> m_;
};

LaplaceMatrix laplacian(const Pattern& pattern, const Eigen::VectorXd& u);

// u_ref = (-1, ..., -1), the base point of the Ricci energy.
Eigen::VectorXd energy_reference_point(int face_count);

// Gradient of the Ricci energy: khat - K(u).
Eigen::VectorXd ricci_energy_gradient(const Pattern& pattern, const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& khat);

// Ricci energy E(u) + sum khat_i u_i, normalized so that its value at u_ref
// is sum khat_i (u_ref)_i. The (0,0,delta) family uses the closed form
// sum_e 2 (s/4)(u_a^2 + u_b^2); (1,1,0) integrates khat - K along the segment
// from u_ref by adaptive Gauss-Kronrod quadrature.
double ricci_energy_value(const Pattern& pattern, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& khat);

// Ricci energy at `to` minus its value at `from`, integrated along the
// straight segment between them (exact for the linear family).
double ricci_energy_difference(const Pattern& pattern, const Eigen::VectorXd& from,
                               const Eigen::VectorXd& to, const Eigen::VectorXd& khat);

// 0.5 * ||K - khat||^2. Throws std::invalid_argument on a length mismatch.
double calabi_energy(const Eigen::VectorXd& K, const Eigen::VectorXd& khat);

}  // namespace circlepat
