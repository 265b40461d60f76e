#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "circlepat/complex.hpp"
#include "circlepat/geometry.hpp"

namespace circlepat {

// A validated complex together with the pattern type and the per-edge
// generalized intersection angle theta (indexed by edge id).
class Pattern {
 public:
  // Throws std::invalid_argument if the complex fails validation or theta has
  // the wrong length, and DomainError if some theta lies outside its interval.
  Pattern(PatternComplex complex, PatternType type, std::vector<double> theta);

  const PatternComplex& complex() const { return complex_; }
  PatternType type() const { return type_; }
  std::span<const double> theta() const { return theta_; }
  double theta(int edge) const { return theta_[edge]; }
  int face_count() const { return complex_.face_count(); }
  int edge_count() const { return complex_.edge_count(); }

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  PatternComplex complex_;
  PatternType type_;
  std::vector<double> theta_;
};

Pattern uniform_pattern(PatternComplex complex, PatternType type, double theta);

// Admissible space U = (-inf, 0)^|F|.
bool is_admissible(const Eigen::VectorXd& u);
// Throws DomainError naming the first offending face.
void check_admissible(const Eigen::VectorXd& u, int expected_size);

}  // namespace circlepat
