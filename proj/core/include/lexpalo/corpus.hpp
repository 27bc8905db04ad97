#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lexpalo {

/// One lyric. `metadata` carries any extra columns (title, singer, album, year...).
struct LyricRecord {
  std::string id;
  std::string text;
  std::string palo;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const LyricRecord&, const LyricRecord&) = default;
};

/// Ordered, immutable collection of records with a per-palo position index.
///
/// Construction enforces: at least one record, non-empty unique ids and
/// non-empty palo labels. Text may be empty (preprocessing can empty a record).
class Corpus {
 public:
  explicit Corpus(std::vector<LyricRecord> records);

  const std::vector<LyricRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  const LyricRecord& operator[](std::size_t i) const { return records_[i]; }

  /// palo -> positions in record order; keys sorted lexicographically.
  const std::map<std::string, std::vector<std::size_t>>& palo_index() const noexcept {
    return palo_index_;
  }
  std::vector<std::string> palos() const;
  std::vector<std::string> labels() const;

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.records_ == b.records_; }

 private:
  std::vector<LyricRecord> records_;
  std::map<std::string, std::vector<std::size_t>> palo_index_;
};

enum class CorpusFormat { kJsonl, kCsv };

CorpusFormat parse_corpus_format(const std::string& name);

/// Reads a JSONL or CSV corpus. Required fields: id, palo, text; any other
/// field lands in metadata. Records keep file order.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);
Corpus read_jsonl(std::istream& in);
Corpus read_csv(std::istream& in);

/// Writes the canonical JSONL form (one object per line, metadata keys inline).
void write_jsonl(std::ostream& out, const Corpus& corpus);
void save_jsonl(const std::filesystem::path& path, const Corpus& corpus);

/// Keeps records whose palo has at least `min_lyrics` records; order preserved.
Corpus filter_top_palos(const Corpus& corpus, std::size_t min_lyrics);

struct SplitSpec {
  double train_fraction = 0.85;
  std::uint64_t seed = 0;
};

struct Split {
  Corpus train;
  Corpus validation;
};

/// Number of training records for a stratum of `n` records.
/// round-half-up(train_fraction * n), clamped to [1, n - 1].
std::size_t stratum_train_count(double train_fraction, std::size_t n);

/// Per-palo shuffle-then-cut. Each stratum is shuffled with an Rng seeded by
/// stratum_seed(spec.seed, palo); the first stratum_train_count() records go to
/// train. Both outputs keep the input's relative record order.
Split stratified_split(const Corpus& corpus, const SplitSpec& spec);

/// Prefix of synthetic ids produced by concat_by_palo.
inline constexpr const char* kAggregateIdPrefix = "__agg__";

/// One record per palo whose text is the newline-joined member texts.
std::map<std::string, LyricRecord> concat_by_palo(const Corpus& corpus);

/// The aggregates of concat_by_palo as a corpus (one record per palo, sorted).
Corpus aggregate_corpus(const Corpus& corpus);

}  // namespace lexpalo
