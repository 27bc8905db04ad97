#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "lexpalo/error.hpp"
#include "lexpalo/genre_graph.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lexpalo;
using lexpalo::testing::corpus_of;

namespace {

DistanceMatrix matrix_of(std::vector<std::vector<double>> values) {
  DistanceMatrix m;
  for (std::size_t i = 0; i < values.size(); ++i) m.labels.push_back(std::string(1, static_cast<char>('a' + i)));
  m.values = std::move(values);
  return m;
}

DistanceMatrix random_matrix(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) v[i][j] = v[j][i] = u(gen);
  }
  return matrix_of(v);
}

SparseRow unit_row(std::mt19937_64& gen, std::uint32_t dims, double density) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SparseRow row;
  double sq = 0.0;
  for (std::uint32_t d = 0; d < dims; ++d) {
    if (u(gen) < density) {
      row.push_back({d, u(gen) + 0.01});
      sq += row.back().weight * row.back().weight;
    }
  }
  if (row.empty()) {
    row.push_back({0, 1.0});
    sq = 1.0;
  }
  for (auto& e : row) e.weight /= std::sqrt(sq);
  return row;
}

}  // namespace

TEST(Distance, IdenticalAndOrthogonal) {
  const SparseRow a{{0, 0.6}, {2, 0.8}};
  const SparseRow b{{1, 1.0}};
  const auto m = distance_matrix({{"x", a}, {"y", a}, {"z", b}});
  EXPECT_EQ(m.labels, (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(m(0, 1), 0.0);
  EXPECT_EQ(m(0, 2), 1.0);
  EXPECT_EQ(m(1, 2), 1.0);
  EXPECT_EQ(m.index_of("z"), 2u);
  EXPECT_THROW(m.index_of("w"), UnknownClassError);
}

TEST(Distance, NormChecked) {
  EXPECT_THROW(distance_matrix({{"x", SparseRow{{0, 0.5}}}}), NormError);
  EXPECT_NO_THROW(distance_matrix({{"x", SparseRow{{0, 1.0 + 5e-7}}}}));
}

TEST(Distance, RandomizedProperties) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<std::string, SparseRow> vectors;
    const std::size_t n = 2 + gen() % 8;
    for (std::size_t i = 0; i < n; ++i) vectors["v" + std::to_string(i)] = unit_row(gen, 12, 0.4);
    const auto m = distance_matrix(vectors);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(m(i, i), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_NEAR(m(i, j), m(j, i), 1e-12);
        EXPECT_GE(m(i, j), 0.0);
        EXPECT_LE(m(i, j), 1.0);
      }
    }
  }
}

TEST(PaloVectors, UnitNormOverSharedVocabulary) {
  const Corpus c = corpus_of({{"A", {"mar sal", "mar"}}, {"B", {"pena mar", "cruz"}}, {"C", {"fiesta"}}});
  const auto v = palo_vectors(c);
  ASSERT_EQ(v.size(), 3u);
  for (const auto& [palo, row] : v) EXPECT_NEAR(norm(row), 1.0, 1e-12) << palo;
  const auto m = distance_matrix(v);
  EXPECT_EQ(m(m.index_of("A"), m.index_of("C")), 1.0);
  EXPECT_LT(m(m.index_of("A"), m.index_of("B")), 1.0);
}

TEST(Cluster, TwoNodes) {
  for (auto linkage : {Linkage::kAverage, Linkage::kSingle, Linkage::kComplete}) {
    const auto d = hierarchical_cluster(matrix_of({{0, 0.4}, {0.4, 0}}), linkage);
    ASSERT_EQ(d.merges.size(), 1u);
    EXPECT_EQ(d.merges[0].distance, 0.4);
    EXPECT_EQ(d.merges[0].size, 2u);
  }
}

TEST(Cluster, ThreeNodeArithmetic) {
  const auto d = hierarchical_cluster(matrix_of({{0, 0.1, 0.9}, {0.1, 0, 0.9}, {0.9, 0.9, 0}}));
  ASSERT_EQ(d.merges.size(), 2u);
  EXPECT_EQ(d.merges[0].a, 0u);
  EXPECT_EQ(d.merges[0].b, 1u);
  EXPECT_DOUBLE_EQ(d.merges[0].distance, 0.1);
  EXPECT_DOUBLE_EQ(d.merges[1].distance, 0.9);
  EXPECT_EQ(d.members(d.merges[1].id), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Cluster, AverageLinkageIsSizeWeighted) {
  const auto m = matrix_of({{0, 0.1, 0.5, 0.8}, {0.1, 0, 0.7, 0.2}, {0.5, 0.7, 0, 0.9}, {0.8, 0.2, 0.9, 0}});
  // {a,b} first; then d({a,b},c) = (0.5 + 0.7) / 2 and d({a,b},d) = (0.8 + 0.2) / 2.
  const auto d = hierarchical_cluster(m);
  EXPECT_DOUBLE_EQ(d.merges[1].distance, 0.5);
  EXPECT_EQ(d.members(d.merges[1].id), (std::vector<std::string>{"a", "b", "d"}));
  // Last: (0.5 + 0.7 + 0.9) / 3.
  EXPECT_NEAR(d.merges[2].distance, 0.7, 1e-15);
  const auto single = hierarchical_cluster(m, Linkage::kSingle);
  EXPECT_EQ(single.merges[1].distance, 0.2);
  EXPECT_EQ(single.merges[2].distance, 0.5);
  EXPECT_EQ(hierarchical_cluster(m, Linkage::kComplete).merges[2].distance, 0.9);
}

TEST(Cluster, TiesPickTheSmallestPair) {
  const auto d = hierarchical_cluster(matrix_of({{0, 0.3, 0.3}, {0.3, 0, 0.3}, {0.3, 0.3, 0}}));
  EXPECT_EQ(d.merges[0].a, 0u);
  EXPECT_EQ(d.merges[0].b, 1u);
}

TEST(Cluster, MonotoneHeightsOnRandomMatrices) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_matrix(gen, 2 + gen() % 9);
    for (auto linkage : {Linkage::kAverage, Linkage::kSingle, Linkage::kComplete}) {
      const auto d = hierarchical_cluster(m, linkage);
      ASSERT_EQ(d.merges.size(), m.size() - 1);
      for (std::size_t k = 1; k < d.merges.size(); ++k) {
        EXPECT_GE(d.merges[k].distance, d.merges[k - 1].distance - 1e-12);
      }
      EXPECT_EQ(d.merges.back().size, m.size());
    }
  }
  EXPECT_THROW(hierarchical_cluster(matrix_of({{0}})), InvalidArgumentError);
}

TEST(Cluster, LinkageNames) {
  EXPECT_EQ(parse_linkage("single"), Linkage::kSingle);
  EXPECT_EQ(linkage_name(parse_linkage("complete")), "complete");
  EXPECT_THROW(parse_linkage("ward"), InvalidArgumentError);
}

TEST(Mst, ThreeNodes) {
  const auto m = matrix_of({{0, 1, 2}, {1, 0, 3}, {2, 3, 0}});
  const auto t = minimum_spanning_tree(m);
  ASSERT_EQ(t.edges.size(), 2u);
  EXPECT_EQ(t.total_weight(), 3.0);
  EXPECT_EQ(t.degree(0), 2u);
  EXPECT_EQ(t.kind, GraphKind::kMst);
}

TEST(Mst, MatchesExhaustiveSearchForSmallGraphs) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = random_matrix(gen, 2 + gen() % 5);
    EXPECT_NEAR(minimum_spanning_tree(m).total_weight(), oracle::brute_force_mst_weight(m.values), 1e-12);
  }
}

TEST(Mst, TreeShapeAndTieBreak) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + gen() % 9;
    auto m = random_matrix(gen, n);
    // Coarse weights force ties.
    for (auto& row : m.values) {
      for (auto& v : row) v = std::round(v * 3) / 3;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && m.values[i][j] == 0) m.values[i][j] = 0.5;
      }
    }
    const auto a = minimum_spanning_tree(m), b = minimum_spanning_tree(m);
    ASSERT_EQ(a.edges.size(), n - 1);
    std::size_t degree_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GE(a.degree(i), 1u);
      degree_sum += a.degree(i);
    }
    EXPECT_EQ(degree_sum, 2 * (n - 1));
    for (std::size_t k = 0; k < a.edges.size(); ++k) {
      EXPECT_EQ(a.edges[k].u, b.edges[k].u);
      EXPECT_EQ(a.edges[k].v, b.edges[k].v);
      EXPECT_LT(a.edges[k].u, a.edges[k].v);
    }
  }
}

TEST(Mst, DroppingTheHeaviestUnusedEdgeChangesNothing) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = random_matrix(gen, 3 + gen() % 6);
    const auto tree = minimum_spanning_tree(m);
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        if (m(i, j) > m(bi, bj)) bi = i, bj = j;
      }
    }
    bool used = false;
    for (const auto& e : tree.edges) used |= (e.u == bi && e.v == bj);
    if (used) continue;
    m.values[bi][bj] = m.values[bj][bi] = 1e9;  // effectively absent
    const auto again = minimum_spanning_tree(m);
    ASSERT_EQ(again.edges.size(), tree.edges.size());
    for (std::size_t k = 0; k < tree.edges.size(); ++k) {
      EXPECT_EQ(again.edges[k].u, tree.edges[k].u);
      EXPECT_EQ(again.edges[k].v, tree.edges[k].v);
    }
  }
}

TEST(CompleteGraph, EdgeCount) {
  std::mt19937_64 gen(9);
  const auto m = random_matrix(gen, 6);
  const auto g = complete_graph(m);
  EXPECT_EQ(g.edges.size(), 15u);
  EXPECT_EQ(g.kind, GraphKind::kComplete);
}

TEST(Centrality, EqualDistances) {
  const auto c = closeness_centrality(matrix_of({{0, 0.4, 0.4}, {0.4, 0, 0.4}, {0.4, 0.4, 0}}));
  for (double v : c) EXPECT_DOUBLE_EQ(v, 1.0 / 0.4);
}

TEST(Centrality, Proportionality) {
  // a is at 0.2 from b and c; d is at 0.4 from everyone... kept symmetric by
  // making every distance from d twice the matching one from a.
  const auto c = closeness_centrality(matrix_of({{0, 0.3, 0.3, 0.3},
                                                 {0.3, 0, 0.3, 0.6},
                                                 {0.3, 0.3, 0, 0.6},
                                                 {0.3, 0.6, 0.6, 0}}));
  EXPECT_DOUBLE_EQ(c[0], 3.0 / 0.9);
  EXPECT_DOUBLE_EQ(c[3], 3.0 / 1.5);
  const auto half = closeness_centrality(matrix_of({{0, 0.2, 0.4}, {0.2, 0, 0.6}, {0.4, 0.6, 0}}));
  // Node 2 sums to 1.0, node 0 to 0.6; with equal-sized neighbourhoods the
  // ratio of centralities is the inverse ratio of the sums.
  EXPECT_DOUBLE_EQ(half[0] / half[2], 1.0 / 0.6);
}

TEST(Centrality, ZeroDistanceIsDegenerate) {
  EXPECT_THROW(closeness_centrality(matrix_of({{0, 0}, {0, 0}})), DegenerateError);
}

TEST(Dot, TwoNodes) {
  const auto m = matrix_of({{0, 0.25}, {0.25, 0}});
  const std::string dot = export_dot(complete_graph(m), m);
  const auto g = oracle::parse_dot(dot);
  EXPECT_EQ(g.name, "network");
  EXPECT_EQ(g.centrality.size(), 2u);
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.edges[0].weight, 0.25);
}

TEST(Dot, MstHasNMinusOneEdgeLinesAndWeightsRoundTrip) {
  std::mt19937_64 gen(10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_matrix(gen, 2 + gen() % 8);
    const auto tree = minimum_spanning_tree(m);
    const auto g = oracle::parse_dot(export_dot(tree, m));
    EXPECT_EQ(g.name, "mst");
    ASSERT_EQ(g.edges.size(), m.size() - 1);
    const auto centrality = closeness_centrality(m);
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      EXPECT_EQ(g.edges[k].u, m.labels[tree.edges[k].u]);
      EXPECT_EQ(g.edges[k].v, m.labels[tree.edges[k].v]);
      EXPECT_EQ(g.edges[k].weight, tree.edges[k].weight);  // bit-exact
    }
    for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(g.centrality.at(m.labels[i]), centrality[i]);
  }
}

TEST(Dot, QuotesAwkwardLabels) {
  DistanceMatrix m = matrix_of({{0, 0.5}, {0.5, 0}});
  m.labels = {"sole\"a", "bulerías"};
  const std::string dot = export_dot(complete_graph(m), m);
  EXPECT_NE(dot.find("\"sole\\\"a\" -- \"bulerías\""), std::string::npos) << dot;
}

TEST(DendrogramJson, Structure) {
  const auto d = hierarchical_cluster(matrix_of({{0, 0.1, 0.9}, {0.1, 0, 0.8}, {0.9, 0.8, 0}}));
  const auto j = nlohmann::json::parse(dendrogram_json(d));
  EXPECT_EQ(j["linkage"], "average");
  EXPECT_EQ(j["labels"].size(), 3u);
  ASSERT_EQ(j["merges"].size(), 2u);
  EXPECT_EQ(j["merges"][0]["members"], nlohmann::json({"a", "b"}));
  EXPECT_EQ(j["merges"][1]["id"], 4);
  EXPECT_DOUBLE_EQ(j["merges"][1]["distance"].get<double>(), 0.85);
}
