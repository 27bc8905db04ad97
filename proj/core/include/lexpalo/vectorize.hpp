#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexpalo/corpus.hpp"

namespace lexpalo {

/// Sorted set of training types with document frequencies.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// `words` must be strictly increasing; `df` aligned with it, each in [1, n_docs].
  Vocabulary(std::vector<std::string> words, std::vector<std::size_t> df, std::size_t n_docs);

  // The index views into `words_`; copies rebuild it. Moving the vector keeps
  // its buffer, so moves stay valid.
  Vocabulary(const Vocabulary& other) : Vocabulary(other.words_, other.df_, other.n_docs_) {}
  Vocabulary(Vocabulary&&) noexcept = default;
  Vocabulary& operator=(const Vocabulary& other) {
    if (this != &other) *this = Vocabulary(other);
    return *this;
  }
  Vocabulary& operator=(Vocabulary&&) noexcept = default;

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::vector<std::size_t>& document_frequencies() const noexcept { return df_; }
  std::size_t df(std::size_t index) const { return df_[index]; }
  /// Number of documents the vocabulary was built from (|D| in the IDF).
  std::size_t n_docs() const noexcept { return n_docs_; }

  std::optional<std::uint32_t> find(std::string_view word) const;
  const std::string& word(std::size_t index) const { return words_[index]; }

  /// 1 + ln(|D| / df(w)).
  double idf(std::size_t index) const;

 private:
  std::vector<std::string> words_;
  std::vector<std::size_t> df_;
  std::size_t n_docs_ = 0;
  std::unordered_map<std::string_view, std::uint32_t> index_;
};

/// Builds the vocabulary from the non-empty documents of `train`.
/// Throws EmptyCorpusError when no document has a token.
Vocabulary build_vocabulary(const Corpus& train);

struct SparseEntry {
  std::uint32_t index;
  double weight;
};

/// Entries sorted by index, no duplicates, no zero weights.
using SparseRow = std::vector<SparseEntry>;

double dot(const SparseRow& a, const SparseRow& b);
double norm(const SparseRow& row);

struct TfIdfMatrix {
  std::vector<SparseRow> rows;
  std::vector<std::string> doc_ids;
  std::vector<std::size_t> empty_rows;  // rows with no in-vocabulary token
};

/// L2-normalized TF-IDF row for one tokenized document. tf = count / token
/// length; out-of-vocabulary tokens are ignored. Empty when nothing matches.
SparseRow tfidf_row(std::span<const std::string> tokens, const Vocabulary& vocab);

/// One row per document of `docs`. Throws VocabularyMismatchError on an
/// empty vocabulary.
TfIdfMatrix tfidf(const Corpus& docs, const Vocabulary& vocab);

}  // namespace lexpalo
