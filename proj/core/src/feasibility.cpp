#include "circlepat/feasibility.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "circlepat/errors.hpp"

namespace circlepat {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_length(const PatternComplex& complex, const Eigen::VectorXd& khat) {
  if (khat.size() != complex.face_count()) {
    throw std::invalid_argument("target has " + std::to_string(khat.size()) +
                                " entries for " + std::to_string(complex.face_count()) +
                                " faces");
  }
}

Witness make_witness(const PatternComplex& complex, const Eigen::VectorXd& khat,
                     FaceSubset faces) {
  Witness w;
  w.edges = edge_neighborhood(complex, faces);
  for (int f : faces.faces()) w.lhs += khat[f];
  w.rhs = kTwoPi * static_cast<double>(w.edges.size());
  w.faces = std::move(faces);
  return w;
}

// Tolerance band around equality for a subset with the given lhs and size.
double marginal_band(double lhs, std::size_t subset_size, double max_khat) {
  return kStrictRelative * (lhs + static_cast<double>(subset_size) * max_khat);
}

// Edmonds-Karp on a small dense-ish graph with real capacities. Residual
// capacities at or below `eps` count as saturated.
class FlowNetwork {
 public:
  FlowNetwork(int nodes, double eps) : adj_(nodes), eps_(eps) {}

  void add_arc(int from, int to, double cap) {
    adj_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, cap});
    adj_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, 0.0});
  }

  double max_flow(int source, int sink) {
    double total = 0.0;
    std::vector<int> parent_arc(adj_.size());
    for (;;) {
      std::fill(parent_arc.begin(), parent_arc.end(), -1);
      std::queue<int> q;
      q.push(source);
      parent_arc[source] = -2;
      while (!q.empty() && parent_arc[sink] == -1) {
        const int v = q.front();
        q.pop();
        for (int a : adj_[v]) {
          const int w = arcs_[a].to;
          if (parent_arc[w] == -1 && arcs_[a].cap > eps_) {
            parent_arc[w] = a;
            q.push(w);
          }
        }
      }
      if (parent_arc[sink] == -1) return total;

      double push = std::numeric_limits<double>::infinity();
      for (int v = sink; v != source; v = arcs_[parent_arc[v] ^ 1].to) {
        push = std::min(push, arcs_[parent_arc[v]].cap);
      }
      for (int v = sink; v != source; v = arcs_[parent_arc[v] ^ 1].to) {
        arcs_[parent_arc[v]].cap -= push;
        arcs_[parent_arc[v] ^ 1].cap += push;
      }
      total += push;
    }
  }

  // Nodes reachable from source in the residual graph (the min-cut source side).
  std::vector<bool> source_side(int source) const {
    std::vector<bool> seen(adj_.size(), false);
    std::queue<int> q;
    q.push(source);
    seen[source] = true;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int a : adj_[v]) {
        if (!seen[arcs_[a].to] && arcs_[a].cap > eps_) {
          seen[arcs_[a].to] = true;
          q.push(arcs_[a].to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    double cap;
  };
  std::vector<std::vector<int>> adj_;
  std::vector<Arc> arcs_;
  double eps_;
};

struct FlowOutcome {
  bool saturated;
  FaceSubset cut_faces;
};

FlowOutcome solve_transport(const PatternComplex& complex, const Eigen::VectorXd& face_caps,
                            double eps) {
  const int nf = complex.face_count();
  const int ne = complex.edge_count();
  const int source = nf + ne;
  const int sink = source + 1;
  FlowNetwork net(nf + ne + 2, eps);
  const double inf = std::numeric_limits<double>::infinity();
  for (int f = 0; f < nf; ++f) {
    net.add_arc(source, f, face_caps[f]);
    int last_edge = -1;
    for (const Incidence& inc : complex.incidences(f)) {
      if (inc.edge == last_edge) continue;  // self-adjacent edge: one arc
      net.add_arc(f, nf + inc.edge, inf);
      last_edge = inc.edge;
    }
  }
  for (int e = 0; e < ne; ++e) net.add_arc(nf + e, sink, kTwoPi);

  const double total = face_caps.sum();
  const double flow = net.max_flow(source, sink);
  FlowOutcome out;
  out.saturated = total - flow <= 0x1p-46 * total;
  if (!out.saturated) {
    const auto side = net.source_side(source);
    std::vector<int> faces;
    for (int f = 0; f < nf; ++f) {
      if (side[f]) faces.push_back(f);
    }
    out.cut_faces = FaceSubset(std::move(faces));
  }
  return out;
}

}  // namespace

std::string to_string(FeasibilityReport::Method m) {
  switch (m) {
    case FeasibilityReport::Method::Positivity:
      return "positivity";
    case FeasibilityReport::Method::Exhaustive:
      return "exhaustive";
    default:
      return "maxflow";
  }
}

FeasibilityReport check_positivity(const Eigen::VectorXd& khat) {
  FeasibilityReport rep;
  rep.method = FeasibilityReport::Method::Positivity;
  rep.feasible = true;
  for (Eigen::Index i = 0; i < khat.size(); ++i) {
    if (!(khat[i] > 0.0)) {
      rep.feasible = false;
      Witness w;
      w.faces = FaceSubset({static_cast<int>(i)});
      w.lhs = 0.0;
      w.rhs = khat[i];
      rep.witness = std::move(w);
      break;
    }
  }
  return rep;
}

FeasibilityReport check_exhaustive(const PatternComplex& complex, const Eigen::VectorXd& khat) {
  check_length(complex, khat);
  const int nf = complex.face_count();
  if (nf > kExhaustiveFaceLimit) {
    throw SizeError("exhaustive feasibility check supports at most " +
                    std::to_string(kExhaustiveFaceLimit) + " faces, got " +
                    std::to_string(nf) + "; use check_maxflow");
  }
  if (auto pos = check_positivity(khat); !pos.feasible) return pos;

  // Gray-code walk: each step toggles one face and updates the per-edge
  // count of member endpoints.
  std::vector<int> members(static_cast<std::size_t>(complex.edge_count()), 0);
  int covered = 0;
  double lhs = 0.0;
  double best_excess = -std::numeric_limits<double>::infinity();
  std::uint64_t best_mask = 0;
  std::uint64_t gray = 0;
  const std::uint64_t count = std::uint64_t{1} << nf;
  for (std::uint64_t k = 1; k < count; ++k) {
    const int f = std::countr_zero(k);
    gray ^= std::uint64_t{1} << f;
    const bool adding = (gray >> f) & 1u;
    lhs += adding ? khat[f] : -khat[f];
    for (const Incidence& inc : complex.incidences(f)) {
      int& m = members[inc.edge];
      if (adding) {
        if (m++ == 0) ++covered;
      } else {
        if (--m == 0) --covered;
      }
    }
    const double excess = lhs - kTwoPi * covered;
    if (excess > best_excess) {
      best_excess = excess;
      best_mask = gray;
    }
  }

  std::vector<int> faces;
  for (int f = 0; f < nf; ++f) {
    if ((best_mask >> f) & 1u) faces.push_back(f);
  }
  FeasibilityReport rep;
  rep.method = FeasibilityReport::Method::Exhaustive;
  rep.witness = make_witness(complex, khat, FaceSubset(std::move(faces)));
  const Witness& w = *rep.witness;
  rep.feasible = w.lhs < w.rhs;
  rep.marginal = std::abs(w.slack()) <= marginal_band(w.lhs, w.faces.size(), khat.maxCoeff());
  return rep;
}

FeasibilityReport check_maxflow(const PatternComplex& complex, const Eigen::VectorXd& khat) {
  check_length(complex, khat);
  if (auto pos = check_positivity(khat); !pos.feasible) return pos;

  const double max_khat = khat.maxCoeff();
  const double eps = 0x1p-50 * std::max(max_khat, kTwoPi);
  FeasibilityReport rep;
  rep.method = FeasibilityReport::Method::MaxFlow;

  const FlowOutcome plain = solve_transport(complex, khat, eps);
  if (!plain.saturated) {
    rep.feasible = false;
    rep.witness = make_witness(complex, khat, plain.cut_faces);
    rep.marginal = std::abs(rep.witness->slack()) <=
                   marginal_band(rep.witness->lhs, rep.witness->faces.size(), max_khat);
    return rep;
  }

  const Eigen::VectorXd raised =
      (khat.array() * (1.0 + kStrictRelative) + kStrictRelative * max_khat).matrix();
  const FlowOutcome strict = solve_transport(complex, raised, eps);
  if (strict.saturated) {
    rep.feasible = true;
    return rep;
  }
  rep.feasible = false;
  rep.marginal = true;
  rep.witness = make_witness(complex, khat, strict.cut_faces);
  return rep;
}

FeasibilityReport check_feasibility(const Pattern& pattern, const Eigen::VectorXd& khat) {
  check_length(pattern.complex(), khat);
  if (pattern.type().linear()) return check_positivity(khat);
  return check_maxflow(pattern.complex(), khat);
}

}  // namespace circlepat
