#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "circlepat/complex.hpp"
#include "circlepat/geometry.hpp"
#include "circlepat/pattern.hpp"

namespace circlepat::fixtures {

inline std::vector<PatternType> all_types() {
  return {PatternType::type_110(), PatternType::type_00d(1), PatternType::type_00d(0),
          PatternType::type_00d(-1)};
}

inline double random_theta(std::mt19937_64& rng, int delta) {
  if (delta == 1) return std::uniform_real_distribution<double>(0.05, 3.09)(rng);
  return std::uniform_real_distribution<double>(0.05, 3.0)(rng);
}

inline Eigen::VectorXd random_u(std::mt19937_64& rng, int n, double lo = -3.0, double hi = -0.2) {
  std::uniform_real_distribution<double> d(lo, hi);
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u[i] = d(rng);
  return u;
}

inline Pattern random_theta_pattern(std::mt19937_64& rng, PatternComplex cx, PatternType type) {
  std::vector<double> theta(cx.edge_count());
  for (double& t : theta) t = random_theta(rng, type.delta());
  return Pattern(std::move(cx), type, std::move(theta));
}

// Random multigraph on n faces (self-adjacent edges allowed) with every face
// incident to at least one edge.
inline PatternComplex random_complex(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> face(0, n - 1);
  std::vector<Edge> edges;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  // A random spanning walk keeps every face covered.
  for (int i = 0; i + 1 < n; ++i) {
    edges.push_back({static_cast<int>(edges.size()), order[i], order[i + 1]});
  }
  if (n == 1) edges.push_back({0, 0, 0});
  const int extra = std::uniform_int_distribution<int>(0, 2 * n)(rng);
  for (int k = 0; k < extra; ++k) {
    edges.push_back({static_cast<int>(edges.size()), face(rng), face(rng)});
  }
  return PatternComplex(n, std::move(edges));
}

}  // namespace circlepat::fixtures
