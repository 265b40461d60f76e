#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace circlepat {

// Which side of an edge a face sits on.
enum class Slot : std::uint8_t { A = 0, B = 1 };

struct Edge {
  int id = 0;
  int face_a = 0;
  int face_b = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// One term of a face's curvature sum: the edge and the side the face occupies.
// A self-adjacent edge (face_a == face_b) yields two incidences for its face.
struct Incidence {
  int edge = 0;
  Slot slot = Slot::A;

  friend bool operator==(const Incidence&, const Incidence&) = default;
};

struct Violation {
  enum class Kind {
    EmptyComplex,
    FaceOutOfRange,
    IsolatedFace,
    DuplicateEdgeId,
    EdgeIdOutOfRange,
    LabelCountMismatch,
  };

  Kind kind;
  int face = -1;
  int edge = -1;
  std::string message;
};

// Sorted, duplicate-free list of face indices.
class FaceSubset {
 public:
  FaceSubset() = default;
  explicit FaceSubset(std::vector<int> faces);

  static FaceSubset all(int face_count);

  bool empty() const { return faces_.empty(); }
  std::size_t size() const { return faces_.size(); }
  bool contains(int face) const;
  std::span<const int> faces() const { return faces_; }

  friend bool operator==(const FaceSubset&, const FaceSubset&) = default;

 private:
  std::vector<int> faces_;
};

// Face-edge incidence structure of a cellular decomposed surface. Vertices are
// not stored. The object is immutable once built; it may hold an invalid
// structure, which validate() reports.
class PatternComplex {
 public:
  PatternComplex() = default;
  PatternComplex(int face_count, std::vector<Edge> edges,
                 std::vector<std::string> face_labels = {},
                 std::vector<std::string> edge_labels = {});

  int face_count() const { return face_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  // Edges sorted by id. For a valid complex edges()[i].id == i.
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(int id) const;

  std::span<const std::string> face_labels() const { return face_labels_; }
  std::span<const std::string> edge_labels() const { return edge_labels_; }

  // Incidences of a face in ascending edge id, slot A before slot B.
  std::span<const Incidence> incidences(int face) const;

  friend bool operator==(const PatternComplex& a, const PatternComplex& b) {
    return a.face_count_ == b.face_count_ && a.edges_ == b.edges_ &&
           a.face_labels_ == b.face_labels_ && a.edge_labels_ == b.edge_labels_;
  }

 private:
  int face_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> face_labels_;
  std::vector<std::string> edge_labels_;
  std::vector<std::vector<Incidence>> incidences_;
};

std::vector<Violation> validate(const PatternComplex& complex);

// Throws std::out_of_range for a face outside [0, face_count).
std::vector<Incidence> incidences_of(const PatternComplex& complex, int face);

// Sorted ids of every edge incident to some face of the subset.
// Throws std::invalid_argument for an empty subset.
std::vector<int> edge_neighborhood(const PatternComplex& complex, const FaceSubset& subset);

// Quad-grid decomposition of the torus with m rows and n columns. Face (i, j)
// has index i*n + j; edge 2k joins face k to its right neighbour and edge
// 2k+1 joins it to the face below, both with wraparound.
PatternComplex builtin_torus_grid(int m, int n);

}  // namespace circlepat
