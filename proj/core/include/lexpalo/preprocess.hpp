#pragma once

// Lyric text normalization: multiword concatenation, corpus-level case
// normalization with a threshold gamma, punctuation and diacritic removal,
// whitespace tokenization and stop-word removal.
//
// All strings are UTF-8.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lexpalo/corpus.hpp"

namespace lexpalo {

/// A multiword phrase and the single token that replaces it.
struct ConcatRule {
  std::string phrase;  // e.g. "Santa Ana"
  std::string joined;  // e.g. "SantaAna"

  friend bool operator==(const ConcatRule&, const ConcatRule&) = default;
};

/// The punctuation removed by default: , ; . : ¡ ! ¿ ? @ # \ $
inline constexpr std::u32string_view kDefaultPunctuation = U",;.:¡!¿?@#\\$";

struct PreprocessConfig {
  double gamma = 0.2;
  std::vector<ConcatRule> concat_map;
  std::set<std::string> stopwords;
  std::u32string punctuation{kDefaultPunctuation};

  /// Throws InvalidArgumentError when an invariant is broken.
  void validate() const;

  /// gamma 0.2, the bundled Spanish stop-word list and concat map.
  static PreprocessConfig defaults();

  /// No concatenation, no stop words; gamma and punctuation at their defaults.
  static PreprocessConfig bare();
};

/// Tally for one case-normalization key.
struct CaseDecision {
  std::string word;         // lowercase, diacritic-free key
  std::size_t n_lower = 0;  // occurrences starting with a lowercase letter
  std::size_t n_upper = 0;  // occurrences starting with an uppercase letter
  bool lowered = false;     // n_upper < gamma * (n_lower + n_upper)

  friend bool operator==(const CaseDecision&, const CaseDecision&) = default;
};

/// Replaces every phrase of the map (case-insensitive, on word boundaries,
/// any whitespace run between words, longest phrase first) by its joined form.
std::string apply_concat_map(std::string_view text, const PreprocessConfig& config);

/// Counts lowercase/uppercase occurrences per word over the whole corpus and
/// applies the gamma rule. Returns one entry per key seen with an uppercase
/// initial, sorted by key. The corpus must already be concat-mapped.
std::vector<CaseDecision> compute_case_decisions(const Corpus& corpus,
                                                 const PreprocessConfig& config);

/// Removes configured punctuation and all nonspacing marks left after
/// canonical decomposition. ñ and Ñ are kept as letters.
std::string strip_accents_and_punct(std::string_view text, const PreprocessConfig& config);

/// Splits on Unicode whitespace; empty tokens dropped.
std::vector<std::string> tokenize(std::string_view text);

/// Exact, case-sensitive stop-word filter.
std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const PreprocessConfig& config);

/// Key used to pair up case variants of a word: lowercase with diacritics and
/// punctuation removed.
std::string case_key(std::string_view token, const PreprocessConfig& config);

/// Runs the per-text stages with case decisions already frozen: concat map,
/// lowering of the keys in `lowered_keys`, stripping, tokenizing, stop words.
std::vector<std::string> preprocess_text(std::string_view text, const PreprocessConfig& config,
                                         const std::set<std::string>& lowered_keys);

struct PreprocessReport {
  Corpus corpus;
  std::vector<CaseDecision> decisions;
  std::vector<std::string> emptied_ids;  // records with no token left

  std::set<std::string> lowered_keys() const;
};

/// Full pipeline; output records hold space-joined tokens. Records emptied by
/// filtering are kept with empty text and listed in `emptied_ids`.
PreprocessReport preprocess_corpus_report(const Corpus& corpus, const PreprocessConfig& config);
Corpus preprocess_corpus(const Corpus& corpus, const PreprocessConfig& config);

/// One token per line; '#' starts a comment; entries are diacritic-stripped.
std::set<std::string> parse_stopwords(std::istream& in);
std::set<std::string> load_stopwords(const std::filesystem::path& path);

/// `phrase<TAB>joined` lines; '#' starts a comment.
std::vector<ConcatRule> parse_concat_map(std::istream& in);
std::vector<ConcatRule> load_concat_map(const std::filesystem::path& path);

/// Contents of the bundled resource files.
std::string_view default_stopwords_text();
std::string_view default_concat_map_text();

/// UTF-8 <-> code point conversion; invalid input bytes become U+FFFD.
std::u32string codepoints_from_utf8(std::string_view utf8);
std::string utf8_from_codepoints(std::u32string_view codepoints);

/// Tokens of an already preprocessed text (ASCII whitespace separated).
std::vector<std::string> split_tokens(std::string_view text);

}  // namespace lexpalo
