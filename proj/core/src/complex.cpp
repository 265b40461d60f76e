#include "circlepat/complex.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace circlepat {

FaceSubset::FaceSubset(std::vector<int> faces) : faces_(std::move(faces)) {
  std::sort(faces_.begin(), faces_.end());
  faces_.erase(std::unique(faces_.begin(), faces_.end()), faces_.end());
}

FaceSubset FaceSubset::all(int face_count) {
  std::vector<int> faces(static_cast<std::size_t>(std::max(face_count, 0)));
  for (int i = 0; i < face_count; ++i) faces[i] = i;
  return FaceSubset(std::move(faces));
}

bool FaceSubset::contains(int face) const {
  return std::binary_search(faces_.begin(), faces_.end(), face);
}

PatternComplex::PatternComplex(int face_count, std::vector<Edge> edges,
                               std::vector<std::string> face_labels,
                               std::vector<std::string> edge_labels)
    : face_count_(face_count),
      edges_(std::move(edges)),
      face_labels_(std::move(face_labels)),
      edge_labels_(std::move(edge_labels)) {
  std::stable_sort(edges_.begin(), edges_.end(),
                   [](const Edge& x, const Edge& y) { return x.id < y.id; });

  incidences_.resize(static_cast<std::size_t>(std::max(face_count_, 0)));
  auto in_range = [this](int f) { return f >= 0 && f < face_count_; };
  for (const Edge& e : edges_) {
    if (in_range(e.face_a)) incidences_[e.face_a].push_back({e.id, Slot::A});
    if (in_range(e.face_b)) incidences_[e.face_b].push_back({e.id, Slot::B});
  }
}

const Edge& PatternComplex::edge(int id) const {
  if (id >= 0 && id < edge_count() && edges_[id].id == id) return edges_[id];
  auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                             [](const Edge& e, int v) { return e.id < v; });
  if (it == edges_.end() || it->id != id) {
    throw std::out_of_range("no edge with id " + std::to_string(id));
  }
  return *it;
}

std::span<const Incidence> PatternComplex::incidences(int face) const {
  if (face < 0 || face >= face_count_) {
    throw std::out_of_range("face " + std::to_string(face) + " outside [0, " +
                            std::to_string(face_count_) + ")");
  }
  return incidences_[face];
}

std::vector<Violation> validate(const PatternComplex& complex) {
  std::vector<Violation> out;
  const int nf = complex.face_count();
  if (nf <= 0) {
    out.push_back({Violation::Kind::EmptyComplex, -1, -1,
                   "face count must be positive, got " + std::to_string(nf)});
  }

  const auto edges = complex.edges();
  const int ne = static_cast<int>(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (k > 0 && edges[k - 1].id == e.id) {
      out.push_back({Violation::Kind::DuplicateEdgeId, -1, e.id,
                     "edge id " + std::to_string(e.id) + " appears more than once"});
    }
    if (e.id < 0 || e.id >= ne) {
      out.push_back({Violation::Kind::EdgeIdOutOfRange, -1, e.id,
                     "edge id " + std::to_string(e.id) + " outside [0, " +
                         std::to_string(ne) + ")"});
    }
    for (int f : {e.face_a, e.face_b}) {
      if (f < 0 || f >= nf) {
        out.push_back({Violation::Kind::FaceOutOfRange, f, e.id,
                       "edge " + std::to_string(e.id) + " references face " +
                           std::to_string(f) + " outside [0, " + std::to_string(nf) + ")"});
      }
    }
  }

  for (int f = 0; f < nf; ++f) {
    if (complex.incidences(f).empty()) {
      out.push_back({Violation::Kind::IsolatedFace, f, -1,
                     "face " + std::to_string(f) + " has no edge incidences"});
    }
  }

  const auto fl = complex.face_labels();
  if (!fl.empty() && static_cast<int>(fl.size()) != nf) {
    out.push_back({Violation::Kind::LabelCountMismatch, -1, -1,
                   std::to_string(fl.size()) + " face labels for " + std::to_string(nf) +
                       " faces"});
  }
  const auto el = complex.edge_labels();
  if (!el.empty() && static_cast<int>(el.size()) != ne) {
    out.push_back({Violation::Kind::LabelCountMismatch, -1, -1,
                   std::to_string(el.size()) + " edge labels for " + std::to_string(ne) +
                       " edges"});
  }
  return out;
}

std::vector<Incidence> incidences_of(const PatternComplex& complex, int face) {
  auto inc = complex.incidences(face);
  return {inc.begin(), inc.end()};
}

std::vector<int> edge_neighborhood(const PatternComplex& complex, const FaceSubset& subset) {
  if (subset.empty()) throw std::invalid_argument("edge_neighborhood: empty face subset");
  std::vector<int> edges;
  for (int f : subset.faces()) {
    for (const Incidence& inc : complex.incidences(f)) edges.push_back(inc.edge);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

PatternComplex builtin_torus_grid(int m, int n) {
  if (m < 1 || n < 1) {
    throw std::invalid_argument("torus grid needs m, n >= 1");
  }
  std::vector<Edge> edges;
  edges.reserve(2 * static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const int k = i * n + j;
      const int right = i * n + (j + 1) % n;
      const int below = ((i + 1) % m) * n + j;
      edges.push_back({2 * k, k, right});
      edges.push_back({2 * k + 1, k, below});
    }
  }
  return PatternComplex(m * n, std::move(edges));
}

}  // namespace circlepat
