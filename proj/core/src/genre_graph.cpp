#include "lexpalo/genre_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lexpalo/error.hpp"

namespace lexpalo {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool same_row(const SparseRow& a, const SparseRow& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const SparseEntry& x, const SparseEntry& y) {
    return x.index == y.index && x.weight == y.weight;
  });
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

std::size_t DistanceMatrix::index_of(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw UnknownClassError("unknown label '" + label + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

double DistanceMatrix::max_off_diagonal() const {
  double best = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) best = std::max(best, values[i][j]);
  }
  return best;
}

DistanceMatrix distance_matrix(const std::map<std::string, SparseRow>& palo_vectors) {
  DistanceMatrix m;
  std::vector<const SparseRow*> rows;
  for (const auto& [label, row] : palo_vectors) {
    const double n = norm(row);
    if (std::abs(n - 1.0) > 1e-6) {
      throw NormError("vector of '" + label + "' has norm " + format_double(n) + ", expected 1");
    }
    m.labels.push_back(label);
    rows.push_back(&row);
  }
  const std::size_t n = rows.size();
  m.values.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = same_row(*rows[i], *rows[j]) ? 0.0 : std::clamp(1.0 - dot(*rows[i], *rows[j]), 0.0, 1.0);
      m.values[i][j] = m.values[j][i] = d;
    }
  }
  return m;
}

std::map<std::string, SparseRow> palo_vectors(const Corpus& preprocessed) {
  const Corpus aggregates = aggregate_corpus(preprocessed);
  const Vocabulary vocab = build_vocabulary(aggregates);
  const TfIdfMatrix matrix = tfidf(aggregates, vocab);
  std::map<std::string, SparseRow> out;
  for (std::size_t i = 0; i < aggregates.size(); ++i) out.emplace(aggregates[i].palo, matrix.rows[i]);
  return out;
}

Linkage parse_linkage(const std::string& name) {
  if (name == "average") return Linkage::kAverage;
  if (name == "single") return Linkage::kSingle;
  if (name == "complete") return Linkage::kComplete;
  throw InvalidArgumentError("unknown linkage '" + name + "' (expected average, single or complete)");
}

std::string linkage_name(Linkage linkage) {
  switch (linkage) {
    case Linkage::kAverage: return "average";
    case Linkage::kSingle: return "single";
    case Linkage::kComplete: return "complete";
  }
  return "average";
}

std::vector<std::string> Dendrogram::members(std::size_t id) const {
  const std::size_t n = labels.size();
  std::vector<std::string> out;
  std::vector<std::size_t> stack{id};
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    if (c < n) {
      out.push_back(labels[c]);
    } else {
      const Merge& m = merges.at(c - n);
      stack.push_back(m.a);
      stack.push_back(m.b);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Dendrogram hierarchical_cluster(const DistanceMatrix& m, Linkage linkage) {
  const std::size_t n = m.size();
  if (n < 2) throw InvalidArgumentError("clustering needs at least two items");
  Dendrogram d;
  d.labels = m.labels;
  d.linkage = linkage;

  // Distances between live clusters, keyed by cluster id.
  const std::size_t max_ids = 2 * n - 1;
  std::vector<std::vector<double>> dist(max_ids, std::vector<double>(max_ids, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i][j] = m(i, j);
  }
  std::vector<std::size_t> live(n);
  std::iota(live.begin(), live.end(), 0);
  std::vector<std::size_t> size(max_ids, 1);

  for (std::size_t next_id = n; live.size() > 1; ++next_id) {
    std::size_t best_a = 0, best_b = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < live.size(); ++x) {
      for (std::size_t y = x + 1; y < live.size(); ++y) {
        const double v = dist[live[x]][live[y]];
        if (v < best) {
          best = v;
          best_a = live[x];
          best_b = live[y];
        }
      }
    }
    std::erase_if(live, [&](std::size_t c) { return c == best_a || c == best_b; });
    size[next_id] = size[best_a] + size[best_b];
    for (std::size_t k : live) {
      const double da = dist[k][best_a], db = dist[k][best_b];
      double v = 0.0;
      switch (linkage) {
        case Linkage::kAverage:
          v = (static_cast<double>(size[best_a]) * da + static_cast<double>(size[best_b]) * db) /
              static_cast<double>(size[next_id]);
          break;
        case Linkage::kSingle: v = std::min(da, db); break;
        case Linkage::kComplete: v = std::max(da, db); break;
      }
      dist[k][next_id] = dist[next_id][k] = v;
    }
    d.merges.push_back({best_a, best_b, best, next_id, size[next_id]});
    live.push_back(next_id);
  }
  return d;
}

double GenreGraph::total_weight() const {
  double s = 0.0;
  for (const auto& e : edges) s += e.weight;
  return s;
}

std::size_t GenreGraph::degree(std::size_t node) const {
  return static_cast<std::size_t>(std::count_if(
      edges.begin(), edges.end(), [&](const Edge& e) { return e.u == node || e.v == node; }));
}

GenreGraph complete_graph(const DistanceMatrix& m) {
  GenreGraph g;
  g.nodes = m.labels;
  g.kind = GraphKind::kComplete;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) g.edges.push_back({i, j, m(i, j)});
  }
  return g;
}

GenreGraph minimum_spanning_tree(const DistanceMatrix& m) {
  if (m.size() < 2) throw InvalidArgumentError("a spanning tree needs at least two nodes");
  GenreGraph all = complete_graph(m);
  std::sort(all.edges.begin(), all.edges.end(), [](const Edge& a, const Edge& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  GenreGraph tree;
  tree.nodes = m.labels;
  tree.kind = GraphKind::kMst;
  DisjointSets sets(m.size());
  for (const auto& e : all.edges) {
    if (sets.unite(e.u, e.v)) tree.edges.push_back(e);
    if (tree.edges.size() + 1 == m.size()) break;
  }
  return tree;
}

std::vector<double> closeness_centrality(const DistanceMatrix& m) {
  const std::size_t n = m.size();
  if (n < 2) throw InvalidArgumentError("centrality needs at least two nodes");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (m(i, j) == 0.0) {
        throw DegenerateError("'" + m.labels[i] + "' and '" + m.labels[j] + "' are at distance 0");
      }
      total += m(i, j);
    }
    out[i] = static_cast<double>(n - 1) / total;
  }
  return out;
}

std::string export_dot(const GenreGraph& g, const DistanceMatrix& m) {
  if (g.nodes != m.labels) throw InvalidArgumentError("graph and matrix labels differ");
  const auto centrality = closeness_centrality(m);
  std::ostringstream out;
  out << "graph " << (g.kind == GraphKind::kMst ? "mst" : "network") << " {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    out << "  " << dot_quote(g.nodes[i]) << " [centrality=" << format_double(centrality[i]) << "];\n";
  }
  for (const auto& e : g.edges) {
    out << "  " << dot_quote(g.nodes[e.u]) << " -- " << dot_quote(g.nodes[e.v])
        << " [weight=" << format_double(e.weight) << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string dendrogram_json(const Dendrogram& d) {
  nlohmann::json j;
  j["labels"] = d.labels;
  j["linkage"] = linkage_name(d.linkage);
  auto merges = nlohmann::json::array();
  for (const auto& m : d.merges) {
    merges.push_back({{"a", m.a},
                      {"b", m.b},
                      {"distance", m.distance},
                      {"id", m.id},
                      {"size", m.size},
                      {"members", d.members(m.id)}});
  }
  j["merges"] = merges;
  return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

}  // namespace lexpalo
