#include "lexpalo/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "lexpalo/error.hpp"
#include "lexpalo/preprocess.hpp"

namespace lexpalo {

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::size_t> df,
                       std::size_t n_docs)
    : words_(std::move(words)), df_(std::move(df)), n_docs_(n_docs) {
  if (words_.size() != df_.size()) throw InvalidArgumentError("vocabulary words and df differ in length");
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (i > 0 && !(words_[i - 1] < words_[i])) {
      throw InvalidArgumentError("vocabulary words must be strictly increasing");
    }
    if (df_[i] < 1 || df_[i] > n_docs_) {
      throw InvalidArgumentError("document frequency of '" + words_[i] + "' out of range");
    }
    index_.emplace(words_[i], static_cast<std::uint32_t>(i));
  }
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::idf(std::size_t index) const {
  return 1.0 + std::log(static_cast<double>(n_docs_) / static_cast<double>(df_[index]));
}

Vocabulary build_vocabulary(const Corpus& train) {
  std::map<std::string, std::size_t> df;
  std::size_t n_docs = 0;
  for (const auto& r : train.records()) {
    const auto toks = split_tokens(r.text);
    if (toks.empty()) continue;
    ++n_docs;
    for (const auto& t : std::set<std::string>(toks.begin(), toks.end())) ++df[t];
  }
  if (n_docs == 0) throw EmptyCorpusError("training corpus has no tokens");
  std::vector<std::string> words;
  std::vector<std::size_t> counts;
  words.reserve(df.size());
  counts.reserve(df.size());
  for (auto& [w, c] : df) {
    words.push_back(w);
    counts.push_back(c);
  }
  return Vocabulary(std::move(words), std::move(counts), n_docs);
}

double dot(const SparseRow& a, const SparseRow& b) {
  double s = 0.0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->index < j->index) {
      ++i;
    } else if (j->index < i->index) {
      ++j;
    } else {
      s += i->weight * j->weight;
      ++i;
      ++j;
    }
  }
  return s;
}

double norm(const SparseRow& row) {
  double s = 0.0;
  for (const auto& e : row) s += e.weight * e.weight;
  return std::sqrt(s);
}

SparseRow tfidf_row(std::span<const std::string> tokens, const Vocabulary& vocab) {
  if (tokens.empty()) return {};
  std::map<std::uint32_t, std::size_t> counts;
  for (const auto& t : tokens) {
    if (auto idx = vocab.find(t)) ++counts[*idx];
  }
  SparseRow row;
  row.reserve(counts.size());
  const double length = static_cast<double>(tokens.size());
  for (const auto& [idx, c] : counts) {
    row.push_back({idx, static_cast<double>(c) / length * vocab.idf(idx)});
  }
  const double n = norm(row);
  if (n > 0.0) {
    for (auto& e : row) e.weight /= n;
  }
  return row;
}

TfIdfMatrix tfidf(const Corpus& docs, const Vocabulary& vocab) {
  if (vocab.empty()) throw VocabularyMismatchError("vocabulary is empty");
  TfIdfMatrix m;
  m.rows.reserve(docs.size());
  m.doc_ids.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto toks = split_tokens(docs[i].text);
    m.rows.push_back(tfidf_row(toks, vocab));
    m.doc_ids.push_back(docs[i].id);
    if (m.rows.back().empty()) m.empty_rows.push_back(i);
  }
  return m;
}

}  // namespace lexpalo
