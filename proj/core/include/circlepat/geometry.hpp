#pragma once

#include <string>

#include <Eigen/Core>

namespace circlepat {

// Vertex types (epsilon, epsilon, delta) of the per-edge generalized
// hyperbolic triangle. Supported: (1,1,0), (0,0,1), (0,0,0), (0,0,-1).
class PatternType {
 public:
  // Throws DomainError for an unsupported combination.
  static PatternType make(int epsilon, int delta);
  static constexpr PatternType type_110() { return PatternType(1, 0); }
  static constexpr PatternType type_00d(int delta) { return PatternType(0, delta); }

  constexpr int epsilon() const { return epsilon_; }
  constexpr int delta() const { return delta_; }

  // True for the (0,0,delta) family, where angles are linear in u.
  constexpr bool linear() const { return epsilon_ == 0; }

  std::string name() const;

  friend constexpr bool operator==(PatternType, PatternType) = default;

 private:
  constexpr PatternType(int epsilon, int delta) : epsilon_(epsilon), delta_(delta) {}

  int epsilon_;
  int delta_;
};

// Coordinates of the two faces meeting at an edge; both must be negative.
struct UPair {
  double u1;
  double u2;
};

struct AnglePair {
  double beta1;
  double beta2;
};

// Full per-edge evaluation. partials(i, j) = d beta_i / d u_j.
struct EdgeGeometry {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double l12 = 0.0;
  Eigen::Matrix2d partials = Eigen::Matrix2d::Zero();
};

// u = -2 e^{-r} and its inverse.
double u_from_radius(double r);
double radius_from_u(double u);

// The open theta interval for delta: (0, pi) for delta = 1, (0, inf) otherwise.
bool theta_in_domain(int delta, double theta);
void check_theta(int delta, double theta);

// cot(theta/2), 1/theta or coth(theta/2) for delta = 1, 0, -1.
double s_factor(int delta, double theta);

// (1,1,0): cot beta_1 = (u1^2 - u2^2 - 4 theta^2) / (4 theta u1), evaluated
// with atan2 so that beta lies in (0, pi) without a branch cut at pi/2.
AnglePair angles_110(double theta, UPair u);
double edge_length_110(double theta, UPair u);
Eigen::Matrix2d partials_110(double theta, UPair u);

// (0,0,delta): beta_i = -s(theta) u_i / 2.
AnglePair angles_00d(int delta, double theta, UPair u);
double edge_length_00d(int delta, double theta, UPair u);
Eigen::Matrix2d partials_00d(int delta, double theta, UPair u);

AnglePair edge_angles(PatternType type, double theta, UPair u);
double edge_length(PatternType type, double theta, UPair u);
Eigen::Matrix2d edge_partials(PatternType type, double theta, UPair u);
EdgeGeometry evaluate_edge(PatternType type, double theta, UPair u);

}  // namespace circlepat
