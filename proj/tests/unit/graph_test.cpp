#include <gtest/gtest.h>

#include <set>

#include "mcg/errors.hpp"
#include "mcg/graph/adjacency.hpp"
#include "mcg/graph/metapath.hpp"
#include "mcg/graph/topology.hpp"
#include "mcg/verify/oracles.hpp"

namespace mcg {
namespace {

// Directed entries built from an explicit edge list, used as the reference
// for the topology kinds.
Matrix from_edge_list(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  Matrix m(n, n);
  for (auto [i, j] : edges) {
    m(i, j) = 1.0;
    m(j, i) = 1.0;
  }
  return m;
}

TEST(Topology, FullHasZeroDiagonal) {
  Matrix f = make_topology(TopologyKind::kFull, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(f(i, j), i == j ? 0.0 : 1.0);
  }
}

TEST(Topology, IdentityIsEye) { EXPECT_EQ(make_topology(TopologyKind::kIdentity, 4), Matrix::identity(4)); }

TEST(Topology, LineMatchesEdgeList) {
  Matrix line = make_topology(TopologyKind::kLine, 3);
  EXPECT_EQ(line, from_edge_list(3, {{0, 1}, {1, 2}}));
  EXPECT_EQ(sum(line), 4.0);
}

TEST(Topology, CycleAndStarMatchEdgeLists) {
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<std::pair<std::size_t, std::size_t>> cycle, star;
    for (std::size_t i = 0; i < n; ++i) cycle.push_back({i, (i + 1) % n});
    for (std::size_t i = 1; i < n; ++i) star.push_back({0, i});
    EXPECT_EQ(make_topology(TopologyKind::kCycle, n), from_edge_list(n, cycle)) << n;
    EXPECT_EQ(make_topology(TopologyKind::kStar, n), from_edge_list(n, star)) << n;
  }
}

TEST(Topology, TooFewAgentsThrow) {
  EXPECT_THROW(make_topology(TopologyKind::kStar, 1), ArgumentError);
  EXPECT_THROW(make_topology(TopologyKind::kCycle, 1), ArgumentError);
  EXPECT_THROW(parse_topology("ring"), ArgumentError);
}

TEST(Adjacency, AppendIdentity) {
  std::vector<TopologyKind> kinds{TopologyKind::kFull};
  auto a = AdjacencyTensor::from_topologies(kinds, 3).append_identity();
  ASSERT_EQ(a.k(), 2u);
  EXPECT_EQ(a.layer(0), Matrix::identity(3));
  EXPECT_EQ(a.layer(1), make_topology(TopologyKind::kFull, 3));
  EXPECT_THROW(a.append_identity(), StateError);
}

TEST(Adjacency, SingleAgent) {
  AdjacencyTensor a({Matrix(1, 1)});
  auto b = a.append_identity();
  EXPECT_EQ(b.layer(0), (Matrix{{1.0}}));
}

TEST(Adjacency, RejectsBadLayers) {
  EXPECT_THROW(AdjacencyTensor({Matrix(2, 3)}), DimensionError);
  EXPECT_THROW(AdjacencyTensor({Matrix(2, 2), Matrix(3, 3)}), DimensionError);
  EXPECT_THROW(AdjacencyTensor({Matrix{{0, -1}, {0, 0}}}), ArgumentError);
}

AdjacencyTensor full3_with_identity() {
  std::vector<TopologyKind> kinds{TopologyKind::kFull};
  return AdjacencyTensor::from_topologies(kinds, 3).append_identity();
}

TEST(SoftSelect, UniformWeightsAverageLayers) {
  Rng rng(1);
  auto a = full3_with_identity();
  SelectionWeights sel(1, 1, 2, rng);
  sel.w_phi().value.set_zero();
  Matrix expected = Matrix::identity(3) * 0.5 + make_topology(TopologyKind::kFull, 3) * 0.5;
  EXPECT_LE(max_abs(soft_select(a, sel, 0, 0) - expected), 1e-15);
}

TEST(SoftSelect, SaturatedWeightsPickOneLayer) {
  Rng rng(1);
  auto a = full3_with_identity();
  SelectionWeights sel(1, 1, 2, rng);
  sel.w_phi().value = Matrix{{40.0, -40.0}};
  EXPECT_LE(max_abs(soft_select(a, sel, 0, 0) - Matrix::identity(3)), 1e-12);
}

TEST(SoftSelect, OutOfRangeThrows) {
  Rng rng(1);
  auto a = full3_with_identity();
  SelectionWeights sel(2, 2, 2, rng);
  EXPECT_THROW(soft_select(a, sel, 2, 0), ArgumentError);
  EXPECT_THROW(soft_select(a, sel, 0, 2), ArgumentError);
}

TEST(MetaPath, SingleHopIsUnchanged) {
  Matrix a{{0, 1}, {1, 0}};
  std::vector<Matrix> sel{a};
  EXPECT_EQ(compose_metapath(sel), a);
}

TEST(MetaPath, TwoHopPath) {
  Matrix e1(3, 3), e2(3, 3);
  e1(1, 0) = 1.0;  // 0 → 1
  e2(2, 1) = 1.0;  // 1 → 2
  std::vector<Matrix> sel{e1, e2};
  Matrix expected(3, 3);
  expected(2, 0) = 1.0;
  EXPECT_EQ(compose_metapath(sel), expected);
}

TEST(MetaPath, EmptyThrows) { EXPECT_THROW(compose_metapath({}), ArgumentError); }

TEST(MetaPath, SupportMatchesTypedPathEnumeration) {
  Rng rng(11);
  std::bernoulli_distribution coin(0.35);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 5;
    std::vector<Matrix> layers;
    for (int k = 0; k < 3; ++k) {
      Matrix m(n, n);
      for (auto& v : m.data()) v = coin(rng) ? 1.0 : 0.0;
      layers.push_back(m);
    }
    std::vector<std::size_t> types{std::size_t(trial % 3), std::size_t((trial / 3) % 3), 1};
    std::vector<Matrix> selected;
    for (auto t : types) selected.push_back(layers[t]);
    Matrix composed = compose_metapath(selected);
    auto reach = oracle::typed_path_reachability(layers, types);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(composed(i, j) != 0.0, reach[i][j]);
    }
  }
}

TEST(Normalize, ZeroMatrixGivesIdentity) { EXPECT_EQ(normalize(Matrix(3, 3)), Matrix::identity(3)); }

TEST(Normalize, FullTwoNode) {
  EXPECT_EQ(normalize(make_topology(TopologyKind::kFull, 2)), (Matrix{{0.5, 0.5}, {0.5, 0.5}}));
}

TEST(Normalize, RowsSumToOne) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  Matrix a(5, 5);
  for (auto& v : a.data()) v = u(rng);
  Matrix n = normalize(a);
  for (std::size_t r = 0; r < 5; ++r) {
    double s = 0.0;
    for (double v : n.row(r)) s += v;
    EXPECT_NEAR(s, 1.0, 1e-14);
  }
}

TEST(Normalize, NegativeThrows) { EXPECT_THROW(normalize(Matrix{{0, -1}, {0, 0}}), ArgumentError); }

TEST(Edges, ZeroChannelsGiveNone) {
  std::vector<Matrix> ch{Matrix(3, 3), Matrix(3, 3)};
  EXPECT_TRUE(extract_edges(ch, 1e-6).empty());
}

TEST(Edges, FullThreeNodes) {
  std::vector<Matrix> ch{make_topology(TopologyKind::kFull, 3)};
  EdgeSet expected{{0, 1}, {0, 2}, {1, 2}};
  EXPECT_EQ(extract_edges(ch, 1e-6), expected);
  EXPECT_EQ(all_pairs(3), expected);
}

TEST(Edges, DirectedEntryAndDiagonal) {
  Matrix m(4, 4);
  m(3, 1) = 0.5;
  m(2, 2) = 1.0;
  m(0, 2) = 1e-7;
  std::vector<Matrix> ch{m};
  EdgeSet expected{{1, 3}};
  EXPECT_EQ(extract_edges(ch, 1e-6), expected);
}

TEST(Edges, MatchScanOracle) {
  Rng rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Matrix> ch;
    for (int c = 0; c < 2; ++c) {
      Matrix m(5, 5);
      for (auto& v : m.data()) v = u(rng) < 0.7 ? 0.0 : u(rng);
      ch.push_back(m);
    }
    EXPECT_EQ(extract_edges(ch, 0.3), oracle::scan_edges(ch, 0.3));
  }
}

}  // namespace
}  // namespace mcg
