#pragma once

// Brute-force reference implementations. They use nothing from the library
// and follow the textbook formulas as literally as possible, so agreement with
// the optimized code is meaningful.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace lexpalo::oracle {

using Doc = std::vector<std::string>;

struct TfIdfSpace {
  std::vector<std::string> vocab;  // sorted
  std::map<std::string, double> df;
  double n_docs = 0;
};

inline TfIdfSpace tfidf_space(const std::vector<Doc>& train) {
  TfIdfSpace s;
  std::set<std::string> words;
  for (const auto& d : train) {
    if (d.empty()) continue;
    s.n_docs += 1;
    std::set<std::string> seen(d.begin(), d.end());
    for (const auto& w : seen) {
      words.insert(w);
      s.df[w] += 1;
    }
  }
  s.vocab.assign(words.begin(), words.end());
  return s;
}

/// Dense TF-IDF row over s.vocab: (count / length) * (1 + ln(|D| / df)), L2-normalized.
inline std::vector<double> tfidf_dense(const Doc& d, const TfIdfSpace& s) {
  std::vector<double> row(s.vocab.size(), 0.0);
  if (d.empty()) return row;
  const double length = static_cast<double>(d.size());
  for (std::size_t j = 0; j < s.vocab.size(); ++j) {
    const double count = static_cast<double>(std::count(d.begin(), d.end(), s.vocab[j]));
    if (count == 0) continue;
    row[j] = (count / length) * (1.0 + std::log(s.n_docs / s.df.at(s.vocab[j])));
  }
  double sq = 0.0;
  for (double v : row) sq += v * v;
  if (sq == 0.0) return row;
  for (double& v : row) v /= std::sqrt(sq);
  return row;
}

struct NaiveBayes {
  TfIdfSpace space;
  std::vector<std::string> classes;         // sorted
  std::vector<double> prior;                // P(C)
  std::vector<std::vector<double>> p_word;  // P(w|C), linear
};

/// Fit from precomputed training rows (rows[i] = tfidf_dense(docs[i], space)).
inline NaiveBayes naive_bayes_fit(const TfIdfSpace& space, const std::vector<Doc>& docs,
                                  const std::vector<std::vector<double>>& rows,
                                  const std::vector<std::string>& labels, double alpha) {
  NaiveBayes nb;
  nb.space = space;
  std::set<std::string> cls;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!docs[i].empty()) cls.insert(labels[i]);
  }
  nb.classes.assign(cls.begin(), cls.end());
  const std::size_t V = nb.space.vocab.size();
  for (const auto& c : nb.classes) {
    double n_c = 0.0;
    std::vector<double> mass(V, 0.0);
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (docs[i].empty() || labels[i] != c) continue;
      n_c += 1;
      for (std::size_t j = 0; j < V; ++j) mass[j] += rows[i][j];
    }
    nb.prior.push_back(n_c / nb.space.n_docs);
    double denom = 0.0;
    for (std::size_t j = 0; j < V; ++j) denom += alpha + mass[j];
    std::vector<double> p(V);
    for (std::size_t j = 0; j < V; ++j) p[j] = (alpha + mass[j]) / denom;
    nb.p_word.push_back(p);
  }
  return nb;
}

inline NaiveBayes naive_bayes_fit(const std::vector<Doc>& docs, const std::vector<std::string>& labels,
                                  double alpha) {
  const TfIdfSpace space = tfidf_space(docs);
  std::vector<std::vector<double>> rows;
  for (const auto& d : docs) rows.push_back(tfidf_dense(d, space));
  return naive_bayes_fit(space, docs, rows, labels, alpha);
}

/// Score(C|d) = log P(C) + sum_w log P(w|C) * T(w,d), with row = T(., d).
inline std::vector<double> naive_bayes_scores(const NaiveBayes& nb, const std::vector<double>& row) {
  std::vector<double> out;
  for (std::size_t c = 0; c < nb.classes.size(); ++c) {
    double s = std::log(nb.prior[c]);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] != 0.0) s += std::log(nb.p_word[c][j]) * row[j];
    }
    out.push_back(s);
  }
  return out;
}

inline std::vector<double> naive_bayes_scores(const NaiveBayes& nb, const Doc& d) {
  return naive_bayes_scores(nb, tfidf_dense(d, nb.space));
}

/// Minimum spanning tree weight by decoding every Pruefer sequence, i.e. every
/// labelled spanning tree of the complete graph (n^(n-2) of them).
inline double brute_force_mst_weight(const std::vector<std::vector<double>>& w) {
  const std::size_t n = w.size();
  if (n == 2) return w[0][1];
  std::vector<std::size_t> seq(n - 2, 0);
  std::vector<std::size_t> degree(n);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::fill(degree.begin(), degree.end(), 1);
    for (auto s : seq) ++degree[s];
    double total = 0.0;
    for (auto s : seq) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      total += w[leaf][s];
      --degree[leaf];
      --degree[s];
    }
    std::size_t u = n, v = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (degree[i] == 1) (u == n ? u : v) = i;
    }
    total += w[u][v];
    best = std::min(best, total);

    std::size_t k = 0;
    while (k < seq.size() && ++seq[k] == n) seq[k++] = 0;
    if (k == seq.size()) break;
  }
  return best;
}

struct DotEdge {
  std::string u, v;
  double weight;
};

struct DotGraph {
  std::string name;
  std::map<std::string, double> centrality;
  std::vector<DotEdge> edges;
};

/// Reads back the subset of DOT the exporter writes.
inline DotGraph parse_dot(const std::string& text) {
  static const std::regex header(R"re(^graph\s+(\w+)\s*\{$)re");
  static const std::regex node(R"re(^\s*"([^"]*)"\s*\[centrality=([^\]]+)\];$)re");
  static const std::regex edge(R"re(^\s*"([^"]*)"\s*--\s*"([^"]*)"\s*\[weight=([^\]]+)\];$)re");
  DotGraph g;
  std::istringstream in(text);
  std::smatch m;
  for (std::string line; std::getline(in, line);) {
    if (std::regex_match(line, m, header)) {
      g.name = m[1];
    } else if (std::regex_match(line, m, node)) {
      g.centrality[m[1]] = std::stod(m[2]);
    } else if (std::regex_match(line, m, edge)) {
      g.edges.push_back({m[1], m[2], std::stod(m[3])});
    } else if (line != "}") {
      throw std::runtime_error("unparsed DOT line: " + line);
    }
  }
  return g;
}

}  // namespace lexpalo::oracle
