#include "circlepat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "circlepat/errors.hpp"

namespace circlepat {
namespace {

void check_u(UPair u) {
  if (!(u.u1 < 0.0) || !(u.u2 < 0.0) || !std::isfinite(u.u1) || !std::isfinite(u.u2)) {
    std::ostringstream os;
    os.precision(17);
    os << "u must lie in (-inf, 0)^2, got (" << u.u1 << ", " << u.u2 << ")";
    throw DomainError(os.str());
  }
}

// The (1,1,0) formulas are homogeneous after dividing by m = max(|u1|, |u2|, 2 theta),
// which keeps every intermediate O(1) even for |u| near the overflow range.
struct Scaled110 {
  double a, b, c, m;  // a = u1/m, b = u2/m, c = 2 theta/m

  Scaled110(double theta, UPair u) {
    m = std::max({std::abs(u.u1), std::abs(u.u2), 2.0 * theta});
    a = u.u1 / m;
    b = u.u2 / m;
    c = 2.0 * theta / m;
  }

  // (4 theta^2 + (u1-u2)^2) (4 theta^2 + (u1+u2)^2) / m^4
  double product() const {
    return (c * c + (a - b) * (a - b)) * (c * c + (a + b) * (a + b));
  }
};

}  // namespace

PatternType PatternType::make(int epsilon, int delta) {
  if (epsilon == 1 && delta == 0) return PatternType(1, 0);
  if (epsilon == 0 && (delta == 1 || delta == 0 || delta == -1)) return PatternType(0, delta);
  throw DomainError("unsupported pattern type (" + std::to_string(epsilon) + "," +
                    std::to_string(epsilon) + "," + std::to_string(delta) + ")");
}

std::string PatternType::name() const {
  return "(" + std::to_string(epsilon_) + "," + std::to_string(epsilon_) + "," +
         std::to_string(delta_) + ")";
}

double u_from_radius(double r) { return -2.0 * std::exp(-r); }

double radius_from_u(double u) {
  if (!(u < 0.0)) throw DomainError("radius_from_u: u must be negative");
  return -std::log(-u / 2.0);
}

bool theta_in_domain(int delta, double theta) {
  if (!std::isfinite(theta) || !(theta > 0.0)) return false;
  if (delta == 1) return theta < std::numbers::pi;
  return delta == 0 || delta == -1;
}

void check_theta(int delta, double theta) {
  if (theta_in_domain(delta, theta)) return;
  std::ostringstream os;
  os.precision(17);
  if (delta == 1) {
    os << "theta must lie in (0, pi) for delta = 1, got " << theta;
  } else if (delta == 0 || delta == -1) {
    os << "theta must be positive for delta = " << delta << ", got " << theta;
  } else {
    os << "unsupported delta " << delta;
  }
  throw DomainError(os.str());
}

double s_factor(int delta, double theta) {
  check_theta(delta, theta);
  switch (delta) {
    case 1:
      return 1.0 / std::tan(theta / 2.0);
    case -1:
      return 1.0 / std::tanh(theta / 2.0);
    default:
      return 1.0 / theta;
  }
}

AnglePair angles_110(double theta, UPair u) {
  check_theta(0, theta);
  check_u(u);
  const Scaled110 s(theta, u);
  // sin-like argument -4 theta u_i / m^2 > 0 selects the (0, pi) branch.
  const double y1 = -2.0 * s.c * s.a;
  const double y2 = -2.0 * s.c * s.b;
  const double x1 = s.c * s.c + (s.b - s.a) * (s.b + s.a);
  const double x2 = s.c * s.c + (s.a - s.b) * (s.a + s.b);
  return {std::atan2(y1, x1), std::atan2(y2, x2)};
}

double edge_length_110(double theta, UPair u) {
  check_theta(0, theta);
  check_u(u);
  // sinh l = sqrt((4t^2 + (u1-u2)^2)(4t^2 + (u1+u2)^2)) / (2 u1 u2)
  const Scaled110 s(theta, u);
  return std::asinh(std::sqrt(s.product()) / (2.0 * s.a * s.b));
}

Eigen::Matrix2d partials_110(double theta, UPair u) {
  check_theta(0, theta);
  check_u(u);
  const Scaled110 s(theta, u);
  const double p = s.product();
  // off = theta e^{r1+r2} / (2 sinh^2 l) = 8 theta u1 u2 / P
  // diag = -cosh l * off = -4 theta (4 theta^2 + u1^2 + u2^2) / P
  const double off = 4.0 * s.c * s.a * s.b / (p * s.m);
  const double diag = -2.0 * s.c * (s.c * s.c + s.a * s.a + s.b * s.b) / (p * s.m);
  Eigen::Matrix2d m;
  m << diag, off, off, diag;
  return m;
}

AnglePair angles_00d(int delta, double theta, UPair u) {
  const double s = s_factor(delta, theta);
  check_u(u);
  return {-0.5 * s * u.u1, -0.5 * s * u.u2};
}

double edge_length_00d(int delta, double theta, UPair u) {
  check_theta(delta, theta);
  check_u(u);
  const double r1 = radius_from_u(u.u1);
  const double r2 = radius_from_u(u.u2);
  switch (delta) {
    case 1:
      return r1 + r2 + 2.0 * std::log(std::sin(theta / 2.0));
    case -1:
      return r1 + r2 + 2.0 * std::log(std::sinh(theta / 2.0));
    default: {
      const double beta1 = angles_00d(0, theta, u).beta1;
      return std::log(theta) + r2 - std::log(beta1);
    }
  }
}

Eigen::Matrix2d partials_00d(int delta, double theta, UPair u) {
  const double s = s_factor(delta, theta);
  check_u(u);
  Eigen::Matrix2d m;
  m << -0.5 * s, 0.0, 0.0, -0.5 * s;
  return m;
}

AnglePair edge_angles(PatternType type, double theta, UPair u) {
  return type.linear() ? angles_00d(type.delta(), theta, u) : angles_110(theta, u);
}

double edge_length(PatternType type, double theta, UPair u) {
  return type.linear() ? edge_length_00d(type.delta(), theta, u) : edge_length_110(theta, u);
}

Eigen::Matrix2d edge_partials(PatternType type, double theta, UPair u) {
  return type.linear() ? partials_00d(type.delta(), theta, u) : partials_110(theta, u);
}

EdgeGeometry evaluate_edge(PatternType type, double theta, UPair u) {
  const AnglePair b = edge_angles(type, theta, u);
  return {b.beta1, b.beta2, edge_length(type, theta, u), edge_partials(type, theta, u)};
}

}  // namespace circlepat
