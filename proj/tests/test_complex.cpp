#include <gtest/gtest.h>

#include "circlepat/complex.hpp"

using namespace circlepat;

TEST(Validate, TorusGridIsClean) {
  const PatternComplex cx = builtin_torus_grid(2, 2);
  EXPECT_EQ(cx.face_count(), 4);
  EXPECT_EQ(cx.edge_count(), 8);
  EXPECT_TRUE(validate(cx).empty());
  for (const Edge& e : cx.edges()) EXPECT_NE(e.face_a, e.face_b);
}

TEST(Validate, FaceOutOfRange) {
  std::vector<Edge> edges{{0, 0, 1}, {1, 1, 2}, {2, 2, 3}, {3, 3, 7}};
  const auto v = validate(PatternComplex(4, edges));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::FaceOutOfRange);
  EXPECT_EQ(v[0].edge, 3);
}

TEST(Validate, IsolatedFace) {
  std::vector<Edge> edges{{0, 0, 1}, {1, 1, 2}, {2, 2, 0}};
  const auto v = validate(PatternComplex(4, edges));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::IsolatedFace);
  EXPECT_EQ(v[0].face, 3);
}

TEST(Validate, DuplicateAndGappedIds) {
  EXPECT_EQ(validate(PatternComplex(2, {{0, 0, 1}, {0, 1, 0}}))[0].kind,
            Violation::Kind::DuplicateEdgeId);
  EXPECT_EQ(validate(PatternComplex(2, {{0, 0, 1}, {5, 1, 0}}))[0].kind,
            Violation::Kind::EdgeIdOutOfRange);
}

TEST(Validate, EmptyAndLabels) {
  EXPECT_EQ(validate(PatternComplex(0, {}))[0].kind, Violation::Kind::EmptyComplex);
  const auto v = validate(PatternComplex(2, {{0, 0, 1}}, {"only-one"}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::LabelCountMismatch);
}

TEST(Incidences, TorusGridFacesHaveFour) {
  const PatternComplex cx = builtin_torus_grid(2, 2);
  for (int f = 0; f < 4; ++f) EXPECT_EQ(incidences_of(cx, f).size(), 4u);
}

TEST(Incidences, SelfAdjacentEdgeCountsTwice) {
  const PatternComplex cx(1, {{0, 0, 0}});
  const auto inc = incidences_of(cx, 0);
  ASSERT_EQ(inc.size(), 2u);
  EXPECT_EQ(inc[0], (Incidence{0, Slot::A}));
  EXPECT_EQ(inc[1], (Incidence{0, Slot::B}));
}

TEST(Incidences, FaceWithoutEdgesIsEmpty) {
  const PatternComplex cx(3, {{0, 0, 1}});
  EXPECT_TRUE(incidences_of(cx, 2).empty());
  EXPECT_THROW(incidences_of(cx, 3), std::out_of_range);
}

TEST(EdgeNeighborhood, Examples) {
  const PatternComplex cx = builtin_torus_grid(2, 2);
  EXPECT_EQ(edge_neighborhood(cx, FaceSubset({0})).size(), 4u);
  EXPECT_EQ(edge_neighborhood(cx, FaceSubset::all(4)), (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}));

  const PatternComplex loop(2, {{0, 0, 0}, {1, 1, 1}});
  EXPECT_EQ(edge_neighborhood(loop, FaceSubset({0})), std::vector<int>{0});
  EXPECT_THROW(edge_neighborhood(cx, FaceSubset()), std::invalid_argument);
}

TEST(TorusGrid, Counts) {
  for (auto [m, n, f, e] : {std::tuple{2, 2, 4, 8}, {1, 1, 1, 2}, {3, 1, 3, 6}, {8, 8, 64, 128}}) {
    const PatternComplex cx = builtin_torus_grid(m, n);
    EXPECT_EQ(cx.face_count(), f);
    EXPECT_EQ(cx.edge_count(), e);
    EXPECT_TRUE(validate(cx).empty());
    for (int i = 0; i < f; ++i) EXPECT_EQ(cx.incidences(i).size(), 4u);
  }
  EXPECT_THROW(builtin_torus_grid(0, 2), std::invalid_argument);
}

TEST(FaceSubset, SortedAndDeduplicated) {
  const FaceSubset s({3, 1, 3, 0});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_TRUE(s.contains(1));
  EXPECT_FALSE(s.contains(2));
  EXPECT_EQ(std::vector<int>(s.faces().begin(), s.faces().end()), (std::vector<int>{0, 1, 3}));
}

TEST(PatternComplex, EdgesSortedById) {
  const PatternComplex cx(2, {{1, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(cx.edges()[0].id, 0);
  EXPECT_EQ(cx.edge(1).face_a, 1);
  EXPECT_THROW(cx.edge(2), std::out_of_range);
}
