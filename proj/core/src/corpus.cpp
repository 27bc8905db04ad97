#include "lexpalo/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "lexpalo/error.hpp"
#include "lexpalo/random.hpp"

namespace lexpalo {

namespace {

using json = nlohmann::json;

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); });
}

void validate_loaded(const LyricRecord& r, std::size_t line) {
  if (r.id.empty()) throw FormatError(line, "empty id");
  if (r.palo.empty()) throw FormatError(line, "empty palo for id '" + r.id + "'");
  if (is_blank(r.text)) throw FormatError(line, "empty text for id '" + r.id + "'");
}

// Builds the corpus, reporting duplicates with both source lines.
Corpus finish_load(std::vector<LyricRecord> records, const std::vector<std::size_t>& lines) {
  if (records.empty()) throw EmptyCorpusError("corpus has no records");
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto [it, inserted] = seen.emplace(records[i].id, lines[i]);
    if (!inserted) {
      throw DuplicateIdError("duplicate id '" + records[i].id + "' on lines " +
                             std::to_string(it->second) + " and " + std::to_string(lines[i]));
    }
  }
  return Corpus(std::move(records));
}

std::string json_field_as_string(const json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

// RFC 4180 reader. Returns false at end of input. `line` is advanced past the
// physical lines consumed by the record.
bool read_csv_row(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool after_quote = false;
  const std::size_t start_line = line + 1;
  int ch;
  while ((ch = in.get()) != std::char_traits<char>::eof()) {
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (c == '\r' && in.peek() == '\n') {
      continue;
    } else if (c == '\n') {
      ++line;
      fields.push_back(std::move(field));
      return true;
    } else if (c == '"' && field.empty() && !after_quote) {
      quoted = true;
    } else {
      if (after_quote) throw FormatError(start_line, "unexpected character after closing quote");
      field.push_back(c);
    }
  }
  if (quoted) throw FormatError(start_line, "unterminated quoted field");
  ++line;
  fields.push_back(std::move(field));
  return true;
}

void write_record_json(std::ostream& out, const LyricRecord& r) {
  json obj = json::object();
  obj["id"] = r.id;
  obj["palo"] = r.palo;
  obj["text"] = r.text;
  for (const auto& [k, v] : r.metadata) obj[k] = v;
  out << obj.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
}

}  // namespace

Corpus::Corpus(std::vector<LyricRecord> records) : records_(std::move(records)) {
  if (records_.empty()) throw EmptyCorpusError("corpus has no records");
  std::unordered_map<std::string_view, std::size_t> seen;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.id.empty()) throw InvalidArgumentError("record " + std::to_string(i) + " has an empty id");
    if (r.palo.empty()) throw InvalidArgumentError("record '" + r.id + "' has an empty palo");
    if (!seen.emplace(r.id, i).second) throw DuplicateIdError("duplicate id '" + r.id + "'");
    palo_index_[r.palo].push_back(i);
  }
}

std::vector<std::string> Corpus::palos() const {
  std::vector<std::string> out;
  out.reserve(palo_index_.size());
  for (const auto& [palo, _] : palo_index_) out.push_back(palo);
  return out;
}

std::vector<std::string> Corpus::labels() const {
  std::vector<std::string> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.palo);
  return out;
}

CorpusFormat parse_corpus_format(const std::string& name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "csv") return CorpusFormat::kCsv;
  throw InvalidArgumentError("unknown corpus format '" + name + "' (expected jsonl or csv)");
}

Corpus read_jsonl(std::istream& in) {
  std::vector<LyricRecord> records;
  std::vector<std::size_t> lines;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw FormatError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw FormatError(line, "expected a JSON object");
    LyricRecord r;
    for (const char* key : {"id", "palo", "text"}) {
      auto it = obj.find(key);
      if (it == obj.end()) throw FormatError(line, std::string("missing key '") + key + "'");
      if (!it->is_string()) throw FormatError(line, std::string("key '") + key + "' must be a string");
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (it.key() == "id") {
        r.id = it->get<std::string>();
      } else if (it.key() == "palo") {
        r.palo = it->get<std::string>();
      } else if (it.key() == "text") {
        r.text = it->get<std::string>();
      } else {
        r.metadata.emplace(it.key(), json_field_as_string(*it));
      }
    }
    validate_loaded(r, line);
    records.push_back(std::move(r));
    lines.push_back(line);
  }
  return finish_load(std::move(records), lines);
}

Corpus read_csv(std::istream& in) {
  std::vector<std::string> header;
  std::size_t line = 0;
  if (!read_csv_row(in, header, line)) throw EmptyCorpusError("CSV file is empty");
  if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);
  int id_col = -1, palo_col = -1, text_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "id") id_col = static_cast<int>(c);
    if (header[c] == "palo") palo_col = static_cast<int>(c);
    if (header[c] == "text") text_col = static_cast<int>(c);
  }
  if (id_col < 0 || palo_col < 0 || text_col < 0) {
    throw FormatError(1, "CSV header must contain id, palo and text columns");
  }

  std::vector<LyricRecord> records;
  std::vector<std::size_t> lines;
  std::vector<std::string> fields;
  for (;;) {
    const std::size_t row_line = line + 1;
    if (!read_csv_row(in, fields, line)) break;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.size()) {
      throw FormatError(row_line, "expected " + std::to_string(header.size()) + " fields, got " +
                                      std::to_string(fields.size()));
    }
    LyricRecord r;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const int ci = static_cast<int>(c);
      if (ci == id_col) {
        r.id = std::move(fields[c]);
      } else if (ci == palo_col) {
        r.palo = std::move(fields[c]);
      } else if (ci == text_col) {
        r.text = std::move(fields[c]);
      } else {
        r.metadata.emplace(header[c], std::move(fields[c]));
      }
    }
    validate_loaded(r, row_line);
    records.push_back(std::move(r));
    lines.push_back(row_line);
  }
  return finish_load(std::move(records), lines);
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file '" + path.string() + "'");
  return format == CorpusFormat::kJsonl ? read_jsonl(in) : read_csv(in);
}

void write_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const auto& r : corpus.records()) write_record_json(out, r);
}

void save_jsonl(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_jsonl(out, corpus);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Corpus filter_top_palos(const Corpus& corpus, std::size_t min_lyrics) {
  if (min_lyrics < 1) throw InvalidArgumentError("min_lyrics must be >= 1");
  std::vector<LyricRecord> kept;
  for (const auto& r : corpus.records()) {
    if (corpus.palo_index().at(r.palo).size() >= min_lyrics) kept.push_back(r);
  }
  if (kept.empty()) {
    throw EmptyCorpusError("no palo has at least " + std::to_string(min_lyrics) + " lyrics");
  }
  return Corpus(std::move(kept));
}

std::size_t stratum_train_count(double train_fraction, std::size_t n) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgumentError("train_fraction must lie in (0, 1)");
  }
  if (n < 2) throw StratumTooSmallError("stratum needs at least 2 records");
  auto k = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 0.5));
  return std::clamp<std::size_t>(k, 1, n - 1);
}

Split stratified_split(const Corpus& corpus, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw InvalidArgumentError("train_fraction must lie in (0, 1)");
  }
  std::vector<char> in_train(corpus.size(), 0);
  for (const auto& [palo, positions] : corpus.palo_index()) {
    if (positions.size() < 2) {
      throw StratumTooSmallError("palo '" + palo + "' has " + std::to_string(positions.size()) +
                                 " record(s); at least 2 are needed to split");
    }
    std::vector<std::size_t> order = positions;
    Rng rng(stratum_seed(spec.seed, palo));
    rng.shuffle(std::span<std::size_t>(order));
    const std::size_t k = stratum_train_count(spec.train_fraction, order.size());
    for (std::size_t i = 0; i < k; ++i) in_train[order[i]] = 1;
  }
  std::vector<LyricRecord> train, validation;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (in_train[i] ? train : validation).push_back(corpus[i]);
  }
  return Split{Corpus(std::move(train)), Corpus(std::move(validation))};
}

std::map<std::string, LyricRecord> concat_by_palo(const Corpus& corpus) {
  std::map<std::string, LyricRecord> out;
  for (const auto& [palo, positions] : corpus.palo_index()) {
    LyricRecord agg;
    agg.id = std::string(kAggregateIdPrefix) + palo;
    agg.palo = palo;
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if (i > 0) agg.text.push_back('\n');
      agg.text += corpus[positions[i]].text;
    }
    out.emplace(palo, std::move(agg));
  }
  return out;
}

Corpus aggregate_corpus(const Corpus& corpus) {
  std::vector<LyricRecord> records;
  for (auto& [_, rec] : concat_by_palo(corpus)) records.push_back(std::move(rec));
  return Corpus(std::move(records));
}

}  // namespace lexpalo
