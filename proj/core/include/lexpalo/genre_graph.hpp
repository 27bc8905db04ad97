#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lexpalo/corpus.hpp"
#include "lexpalo/vectorize.hpp"

namespace lexpalo {

/// Symmetric, zero-diagonal matrix of cosine distances between labelled vectors.
struct DistanceMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;

  std::size_t size() const noexcept { return labels.size(); }
  double operator()(std::size_t i, std::size_t j) const { return values[i][j]; }
  std::size_t index_of(const std::string& label) const;
  double max_off_diagonal() const;
};

/// CD(u, v) = 1 - u.v for unit vectors over one vocabulary. Labels follow the
/// map's key order. Throws NormError when a vector's norm is off by > 1e-6.
DistanceMatrix distance_matrix(const std::map<std::string, SparseRow>& palo_vectors);

/// TF-IDF vectors of each palo's concatenated lyrics, with the vocabulary and
/// document frequencies taken over the palo aggregates themselves.
std::map<std::string, SparseRow> palo_vectors(const Corpus& preprocessed);

enum class Linkage { kAverage, kSingle, kComplete };

Linkage parse_linkage(const std::string& name);
std::string linkage_name(Linkage linkage);

struct Merge {
  std::size_t a;         // cluster ids: leaves 0..n-1, merges n, n+1, ...
  std::size_t b;         // a < b
  double distance;
  std::size_t id;
  std::size_t size;      // leaves under the new cluster
};

struct Dendrogram {
  std::vector<std::string> labels;
  Linkage linkage = Linkage::kAverage;
  std::vector<Merge> merges;  // n - 1 entries

  /// Leaf labels under cluster `id`, sorted.
  std::vector<std::string> members(std::size_t id) const;
};

/// Naive agglomerative clustering with Lance-Williams updates. Ties pick the
/// lexicographically smallest (a, b) pair of live cluster ids.
Dendrogram hierarchical_cluster(const DistanceMatrix& m, Linkage linkage = Linkage::kAverage);

struct Edge {
  std::size_t u;  // u < v, indices into labels
  std::size_t v;
  double weight;
};

enum class GraphKind { kComplete, kMst };

struct GenreGraph {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  GraphKind kind = GraphKind::kComplete;

  double total_weight() const;
  std::size_t degree(std::size_t node) const;
};

GenreGraph complete_graph(const DistanceMatrix& m);

/// Kruskal over edges ordered by (weight, u, v).
GenreGraph minimum_spanning_tree(const DistanceMatrix& m);

/// (n - 1) / sum of direct distances to every other node.
/// Throws DegenerateError when an off-diagonal distance is 0.
std::vector<double> closeness_centrality(const DistanceMatrix& m);

/// Undirected DOT graph; nodes carry `centrality`, edges carry `weight`.
std::string export_dot(const GenreGraph& g, const DistanceMatrix& m);

/// Dendrogram as JSON: labels, linkage and merge list.
std::string dendrogram_json(const Dendrogram& d);

}  // namespace lexpalo
