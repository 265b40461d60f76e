#include "circlepat/pattern.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "circlepat/errors.hpp"

namespace circlepat {

Pattern::Pattern(PatternComplex complex, PatternType type, std::vector<double> theta)
    : complex_(std::move(complex)), type_(type), theta_(std::move(theta)) {
  const auto violations = validate(complex_);
  if (!violations.empty()) {
    std::string msg = "invalid complex:";
    for (const auto& v : violations) msg += "\n  " + v.message;
    throw std::invalid_argument(msg);
  }
  if (static_cast<int>(theta_.size()) != complex_.edge_count()) {
    throw std::invalid_argument("theta has " + std::to_string(theta_.size()) +
                                " entries for " + std::to_string(complex_.edge_count()) +
                                " edges");
  }
  for (int e = 0; e < complex_.edge_count(); ++e) {
    if (!theta_in_domain(type_.delta(), theta_[e])) {
      try {
        check_theta(type_.delta(), theta_[e]);
      } catch (const DomainError& err) {
        throw DomainError("edge " + std::to_string(e) + ": " + err.what());
      }
    }
  }
}

Pattern uniform_pattern(PatternComplex complex, PatternType type, double theta) {
  const auto n = static_cast<std::size_t>(complex.edge_count());
  return Pattern(std::move(complex), type, std::vector<double>(n, theta));
}

bool is_admissible(const Eigen::VectorXd& u) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!(u[i] < 0.0) || !std::isfinite(u[i])) return false;
  }
  return true;
}

void check_admissible(const Eigen::VectorXd& u, int expected_size) {
  if (u.size() != expected_size) {
    throw std::invalid_argument("u has " + std::to_string(u.size()) + " entries for " +
                                std::to_string(expected_size) + " faces");
  }
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!(u[i] < 0.0) || !std::isfinite(u[i])) {
      std::ostringstream os;
      os.precision(17);
      os << "face " << i << ": u = " << u[i] << " is outside (-inf, 0)";
      throw DomainError(os.str());
    }
  }
}

}  // namespace circlepat
