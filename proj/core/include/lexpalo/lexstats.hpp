#pragma once

// Lexical richness and distribution statistics over preprocessed corpora
// (records whose text is whitespace-separated tokens).

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexpalo/corpus.hpp"

namespace lexpalo {

struct LexicalProfile {
  std::size_t tokens = 0;  // L
  std::size_t types = 0;   // |V|
  double ttr = 0.0;        // |V| / L
};

/// Throws EmptyDocumentError on an empty document.
LexicalProfile profile(std::span<const std::string> document);

struct SttrResult {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n_windows)
  std::size_t window_length = 0;
  std::size_t n_windows = 0;
};

/// Standardized TTR: mean TTR of `n_windows` contiguous windows of
/// `window_length` tokens at uniformly random offsets (drawn with replacement).
/// A window covering the whole document is taken once, with zero error.
SttrResult sttr(std::span<const std::string> document, std::size_t window_length,
                std::size_t n_windows, std::uint64_t seed);

/// All tokens of the corpus in record order.
std::vector<std::string> corpus_tokens(const Corpus& corpus);

struct SongHapax {
  std::string id;
  std::string palo;
  std::size_t palo_hapax_types = 0;
  std::size_t types = 0;  // |V_s|
  double ratio = 0.0;     // r_h
};

struct HapaxReport {
  std::vector<SongHapax> per_song;  // songs with at least one token, corpus order
  std::map<std::string, std::set<std::string>> per_palo_unique;
  std::map<std::string, std::size_t> shared_with_essential;  // empty without essential lists
};

HapaxReport hapax_report(const Corpus& corpus);
HapaxReport hapax_report(const Corpus& corpus,
                         const std::map<std::string, std::vector<std::string>>& essential);

struct PowerLawFit {
  double exponent = 0.0;   // slope in log-log space
  double intercept = 0.0;  // natural-log intercept
  double r_squared = 0.0;
  double range_min = 0.0;
  double range_max = 0.0;
  std::size_t n_points = 0;
};

/// Least-squares line through (ln x, ln y). Needs >= 2 distinct x values.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct RankedType {
  std::string word;
  std::size_t frequency = 0;
};

/// Types by descending frequency; ties broken lexicographically. Rank = index + 1.
std::vector<RankedType> rank_frequencies(const Corpus& corpus);

/// Inclusive 1-based rank interval.
struct RankRange {
  std::size_t first = 1;
  std::size_t last = 1;
};

/// Default Zipf fit range: ranks [10, |V|/10], or every rank when that
/// interval holds fewer than 3 ranks.
RankRange default_zipf_range(std::size_t n_types);

/// Fits frequency ~ rank^exponent. Throws DegenerateFitError when fewer than
/// two types exist or every frequency in range is equal.
PowerLawFit zipf_fit(const Corpus& corpus, std::optional<RankRange> range = std::nullopt);

struct HeapsPoint {
  std::size_t tokens = 0;  // cumulative L
  std::size_t types = 0;   // cumulative |V|
};

struct HeapsCurve {
  std::vector<HeapsPoint> points;
  PowerLawFit fit;  // over checkpoints with L >= L_total / 10
};

/// Shuffles record order once with `seed`, streams tokens and records
/// (L, |V|) at `n_checkpoints` log-spaced values of L.
HeapsCurve heaps_curve(const Corpus& corpus, std::uint64_t seed, std::size_t n_checkpoints = 200);

}  // namespace lexpalo
