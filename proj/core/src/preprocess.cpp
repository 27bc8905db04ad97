#include "lexpalo/preprocess.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "lexpalo/error.hpp"

namespace lexpalo {

namespace {

constexpr char32_t kEnye = U'ñ';
constexpr char32_t kEnyeUpper = U'Ñ';

std::u32string to_u32(std::string_view utf8) {
  const icu::UnicodeString s =
      icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  std::u32string out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

std::string to_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t c : cps) {
    const auto u = static_cast<std::uint32_t>(c);
    if (u < 0x80) {
      out.push_back(static_cast<char>(u));
    } else if (u < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (u >> 6)));
      out.push_back(static_cast<char>(0x80 | (u & 0x3F)));
    } else if (u < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (u >> 12)));
      out.push_back(static_cast<char>(0x80 | ((u >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (u & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (u >> 18)));
      out.push_back(static_cast<char>(0x80 | ((u >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((u >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (u & 0x3F)));
    }
  }
  return out;
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }
bool is_word_char(char32_t c) { return u_isalnum(static_cast<UChar32>(c)) || u_charType(static_cast<UChar32>(c)) == U_NON_SPACING_MARK; }
char32_t lower(char32_t c) { return static_cast<char32_t>(u_tolower(static_cast<UChar32>(c))); }

std::u32string lowered(std::u32string_view s) {
  std::u32string out(s);
  for (auto& c : out) c = lower(c);
  return out;
}

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kInvalidArgument, "ICU NFC normalizer unavailable");
  return *n;
}

const icu::Normalizer2& nfd() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kInvalidArgument, "ICU NFD normalizer unavailable");
  return *n;
}

std::u32string nfc_u32(std::u32string_view s) {
  icu::UnicodeString us;
  for (char32_t c : s) us.append(static_cast<UChar32>(c));
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString composed = nfc().normalize(us, status);
  if (U_FAILURE(status)) return std::u32string(s);
  std::u32string out;
  for (int32_t i = 0; i < composed.length();) {
    const UChar32 c = composed.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

// Core of strip_accents_and_punct over code points.
std::u32string strip_u32(std::u32string_view text, std::u32string_view punctuation) {
  const std::u32string composed = nfc_u32(text);
  const icu::Normalizer2& decomposer = nfd();
  std::u32string out;
  out.reserve(composed.size());
  icu::UnicodeString decomposition;
  for (char32_t c : composed) {
    if (punctuation.find(c) != std::u32string_view::npos) continue;
    if (c == kEnye || c == kEnyeUpper) {
      out.push_back(c);
      continue;
    }
    const auto uc = static_cast<UChar32>(c);
    if (decomposer.getDecomposition(uc, decomposition)) {
      for (int32_t i = 0; i < decomposition.length();) {
        const UChar32 d = decomposition.char32At(i);
        i += U16_LENGTH(d);
        if (u_charType(d) == U_NON_SPACING_MARK) continue;
        if (punctuation.find(static_cast<char32_t>(d)) != std::u32string_view::npos) continue;
        out.push_back(static_cast<char32_t>(d));
      }
    } else if (u_charType(uc) != U_NON_SPACING_MARK) {
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::u32string> split_ws(std::u32string_view text) {
  std::vector<std::u32string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

std::u32string remove_chars(std::u32string_view s, std::u32string_view chars) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    if (chars.find(c) == std::u32string_view::npos) out.push_back(c);
  }
  return out;
}

std::u32string key_u32(std::u32string_view token, std::u32string_view punctuation) {
  return strip_u32(lowered(token), punctuation);
}

struct CompiledRule {
  std::vector<std::u32string> words;  // lowercase
  std::u32string joined;
  std::size_t length = 0;  // code points of the phrase with single spaces
};

std::vector<CompiledRule> compile_rules(const std::vector<ConcatRule>& rules) {
  std::vector<CompiledRule> out;
  for (const auto& r : rules) {
    CompiledRule c;
    c.words = split_ws(lowered(to_u32(r.phrase)));
    c.joined = to_u32(r.joined);
    if (c.words.empty()) continue;
    for (const auto& w : c.words) c.length += w.size();
    c.length += c.words.size() - 1;
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CompiledRule& a, const CompiledRule& b) { return a.length > b.length; });
  return out;
}

// Matches `rule` at position `pos` of `text`; returns the end position or 0.
std::size_t match_rule(std::u32string_view text, std::size_t pos, const CompiledRule& rule) {
  std::size_t i = pos;
  for (std::size_t w = 0; w < rule.words.size(); ++w) {
    if (w > 0) {
      const std::size_t gap = i;
      while (i < text.size() && is_space(text[i])) ++i;
      if (i == gap) return 0;
    }
    const auto& word = rule.words[w];
    if (text.size() - i < word.size()) return 0;
    for (std::size_t k = 0; k < word.size(); ++k) {
      if (lower(text[i + k]) != word[k]) return 0;
    }
    i += word.size();
  }
  if (i < text.size() && is_word_char(text[i])) return 0;
  return i;
}

std::u32string concat_u32(std::u32string_view text, const std::vector<CompiledRule>& rules) {
  if (rules.empty()) return std::u32string(text);
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const bool boundary = i == 0 || !is_word_char(text[i - 1]);
    std::size_t end = 0;
    const CompiledRule* hit = nullptr;
    if (boundary) {
      for (const auto& rule : rules) {
        end = match_rule(text, i, rule);
        if (end > 0) {
          hit = &rule;
          break;
        }
      }
    }
    if (hit != nullptr) {
      out += hit->joined;
      i = end;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

enum class Initial { kNone, kLower, kUpper };

Initial initial_case(std::u32string_view token) {
  if (token.empty()) return Initial::kNone;
  const auto c = static_cast<UChar32>(token.front());
  if (!u_isalpha(c)) return Initial::kNone;
  if (u_isupper(c) || u_istitle(c)) return Initial::kUpper;
  return Initial::kLower;
}

// Tokens of one text after concatenation and punctuation removal; the unit on
// which case counting and lowering operate.
std::vector<std::u32string> case_units(std::u32string_view concatenated,
                                       std::u32string_view punctuation) {
  std::vector<std::u32string> out;
  for (auto& tok : split_ws(concatenated)) {
    auto cleaned = remove_chars(tok, punctuation);
    if (!cleaned.empty()) out.push_back(std::move(cleaned));
  }
  return out;
}

std::vector<std::string> finish_tokens(const std::vector<std::u32string>& units,
                                       const PreprocessConfig& config,
                                       const std::set<std::u32string>& lowered_keys) {
  std::vector<std::string> tokens;
  tokens.reserve(units.size());
  for (const auto& unit : units) {
    std::u32string tok = unit;
    if (!lowered_keys.empty() && lowered_keys.contains(key_u32(tok, config.punctuation))) {
      tok = lowered(tok);
    }
    tok = strip_u32(tok, config.punctuation);
    // Stripping may expose whitespace from a decomposition; re-split to stay exact.
    for (auto& piece : split_ws(tok)) tokens.push_back(to_utf8(piece));
  }
  return remove_stopwords(std::move(tokens), config);
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !(c == ' ' || (c >= '\t' && c <= '\r')); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

}  // namespace

void PreprocessConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgumentError("gamma must lie in [0, 1]");
  for (const auto& rule : concat_map) {
    if (split_ws(to_u32(rule.phrase)).size() < 2) {
      throw InvalidArgumentError("concat phrase '" + rule.phrase + "' must contain several words");
    }
    if (rule.joined.empty()) throw InvalidArgumentError("concat phrase '" + rule.phrase + "' has an empty joined form");
  }
  for (const auto& w : stopwords) {
    if (w.empty() || tokenize(w).size() != 1) {
      throw InvalidArgumentError("stop word '" + w + "' must be a single non-empty token");
    }
  }
}

PreprocessConfig PreprocessConfig::defaults() {
  PreprocessConfig config;
  std::istringstream stop{std::string(default_stopwords_text())};
  config.stopwords = parse_stopwords(stop);
  std::istringstream concat{std::string(default_concat_map_text())};
  config.concat_map = parse_concat_map(concat);
  return config;
}

PreprocessConfig PreprocessConfig::bare() { return PreprocessConfig{}; }

std::string apply_concat_map(std::string_view text, const PreprocessConfig& config) {
  if (config.concat_map.empty()) return std::string(text);
  return to_utf8(concat_u32(to_u32(text), compile_rules(config.concat_map)));
}

std::vector<CaseDecision> compute_case_decisions(const Corpus& corpus,
                                                 const PreprocessConfig& config) {
  std::map<std::u32string, CaseDecision> tally;
  for (const auto& r : corpus.records()) {
    for (const auto& unit : case_units(to_u32(r.text), config.punctuation)) {
      const Initial initial = initial_case(unit);
      if (initial == Initial::kNone) continue;
      auto& d = tally[key_u32(unit, config.punctuation)];
      (initial == Initial::kUpper ? d.n_upper : d.n_lower) += 1;
    }
  }
  std::vector<CaseDecision> out;
  for (auto& [key, d] : tally) {
    if (d.n_upper == 0) continue;
    d.word = to_utf8(key);
    d.lowered = static_cast<double>(d.n_upper) <
                config.gamma * static_cast<double>(d.n_lower + d.n_upper);
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end(),
            [](const CaseDecision& a, const CaseDecision& b) { return a.word < b.word; });
  return out;
}

std::string strip_accents_and_punct(std::string_view text, const PreprocessConfig& config) {
  return to_utf8(strip_u32(to_u32(text), config.punctuation));
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& t : split_ws(to_u32(text))) out.push_back(to_utf8(t));
  return out;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const PreprocessConfig& config) {
  if (config.stopwords.empty()) return tokens;
  std::erase_if(tokens, [&](const std::string& t) { return config.stopwords.contains(t); });
  return tokens;
}

std::string case_key(std::string_view token, const PreprocessConfig& config) {
  return to_utf8(key_u32(to_u32(token), config.punctuation));
}

std::vector<std::string> preprocess_text(std::string_view text, const PreprocessConfig& config,
                                         const std::set<std::string>& lowered_keys) {
  std::set<std::u32string> keys;
  for (const auto& k : lowered_keys) keys.insert(to_u32(k));
  const auto rules = compile_rules(config.concat_map);
  return finish_tokens(case_units(concat_u32(to_u32(text), rules), config.punctuation), config,
                       keys);
}

std::set<std::string> PreprocessReport::lowered_keys() const {
  std::set<std::string> out;
  for (const auto& d : decisions) {
    if (d.lowered) out.insert(d.word);
  }
  return out;
}

PreprocessReport preprocess_corpus_report(const Corpus& corpus, const PreprocessConfig& config) {
  config.validate();
  const auto rules = compile_rules(config.concat_map);

  std::vector<LyricRecord> concatenated = corpus.records();
  for (auto& r : concatenated) r.text = to_utf8(concat_u32(to_u32(r.text), rules));
  Corpus staged(std::move(concatenated));

  PreprocessReport report{staged, compute_case_decisions(staged, config), {}};
  std::set<std::u32string> keys;
  for (const auto& d : report.decisions) {
    if (d.lowered) keys.insert(to_u32(d.word));
  }

  std::vector<LyricRecord> out = staged.records();
  for (auto& r : out) {
    const auto units = case_units(to_u32(r.text), config.punctuation);
    r.text = join(finish_tokens(units, config, keys));
    if (r.text.empty()) report.emptied_ids.push_back(r.id);
  }
  report.corpus = Corpus(std::move(out));
  return report;
}

Corpus preprocess_corpus(const Corpus& corpus, const PreprocessConfig& config) {
  return preprocess_corpus_report(corpus, config).corpus;
}

std::set<std::string> parse_stopwords(std::istream& in) {
  const PreprocessConfig plain;
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string entry = trim(strip_comment(line));
    if (entry.empty()) continue;
    out.insert(strip_accents_and_punct(entry, plain));
  }
  return out;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open stop-word file '" + path.string() + "'");
  return parse_stopwords(in);
}

std::vector<ConcatRule> parse_concat_map(std::istream& in) {
  std::vector<ConcatRule> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(strip_comment(line)).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError(n, "concat map line needs phrase<TAB>joined");
    ConcatRule rule{trim(line.substr(0, tab)), trim(line.substr(tab + 1))};
    if (rule.phrase.empty() || rule.joined.empty()) {
      throw FormatError(n, "concat map line has an empty phrase or joined form");
    }
    out.push_back(std::move(rule));
  }
  return out;
}

std::vector<ConcatRule> load_concat_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open concat-map file '" + path.string() + "'");
  return parse_concat_map(in);
}

std::u32string codepoints_from_utf8(std::string_view utf8) { return to_u32(utf8); }
std::string utf8_from_codepoints(std::u32string_view codepoints) { return to_utf8(codepoints); }

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const auto ws = [](char c) { return c == ' ' || (c >= '\t' && c <= '\r'); };
  while (i < text.size()) {
    while (i < text.size() && ws(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !ws(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

}  // namespace lexpalo
