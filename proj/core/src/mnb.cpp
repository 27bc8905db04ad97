#include "lexpalo/mnb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "lexpalo/error.hpp"

namespace lexpalo {

ClassMass accumulate_class_mass(const TfIdfMatrix& matrix, std::span<const std::string> labels,
                                std::size_t vocab_size) {
  if (labels.size() != matrix.rows.size()) {
    throw LabelMismatchError("got " + std::to_string(labels.size()) + " labels for " +
                             std::to_string(matrix.rows.size()) + " rows");
  }
  std::set<std::string> all(labels.begin(), labels.end());
  ClassMass mass;
  mass.classes.assign(all.begin(), all.end());
  std::map<std::string_view, std::size_t> class_of;
  for (std::size_t c = 0; c < mass.classes.size(); ++c) class_of.emplace(mass.classes[c], c);

  mass.doc_counts.assign(mass.classes.size(), 0);
  mass.word_mass.assign(mass.classes.size(), std::vector<double>(vocab_size, 0.0));
  mass.total_mass.assign(mass.classes.size(), 0.0);
  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    const auto& row = matrix.rows[i];
    if (row.empty()) continue;
    const std::size_t c = class_of.at(labels[i]);
    ++mass.doc_counts[c];
    for (const auto& e : row) {
      if (e.index >= vocab_size) throw VocabularyMismatchError("row index outside the vocabulary");
      mass.word_mass[c][e.index] += e.weight;
    }
  }
  for (std::size_t c = 0; c < mass.classes.size(); ++c) {
    if (mass.doc_counts[c] == 0) {
      throw LabelMismatchError("class '" + mass.classes[c] + "' has no non-empty training row");
    }
    for (double m : mass.word_mass[c]) mass.total_mass[c] += m;
  }
  return mass;
}

MnbModel::MnbModel(std::vector<std::string> classes, std::vector<double> log_priors,
                   std::vector<std::vector<double>> word_logprob, double alpha, Vocabulary vocab)
    : classes_(std::move(classes)),
      log_priors_(std::move(log_priors)),
      word_logprob_(std::move(word_logprob)),
      alpha_(alpha),
      vocab_(std::move(vocab)) {
  if (classes_.empty()) throw InvalidArgumentError("model needs at least one class");
  if (log_priors_.size() != classes_.size() || word_logprob_.size() != classes_.size()) {
    throw InvalidArgumentError("model arrays disagree with the class list");
  }
  for (const auto& row : word_logprob_) {
    if (row.size() != vocab_.size()) throw VocabularyMismatchError("log-probability row length differs from |V|");
  }
  if (!std::is_sorted(classes_.begin(), classes_.end()) ||
      std::adjacent_find(classes_.begin(), classes_.end()) != classes_.end()) {
    throw InvalidArgumentError("model classes must be sorted and distinct");
  }
}

double MnbModel::prior(std::size_t c) const { return std::exp(log_priors_[c]); }

std::size_t MnbModel::class_index(const std::string& palo) const {
  auto it = std::lower_bound(classes_.begin(), classes_.end(), palo);
  if (it == classes_.end() || *it != palo) throw UnknownClassError("unknown class '" + palo + "'");
  return static_cast<std::size_t>(it - classes_.begin());
}

MnbModel fit_from_mass(const ClassMass& mass, double alpha, const Vocabulary& vocab) {
  if (!(alpha > 0.0)) throw AlphaNonPositiveError("alpha must be > 0");
  const std::size_t n_classes = mass.classes.size();
  std::size_t n_docs = 0;
  for (auto n : mass.doc_counts) n_docs += n;

  std::vector<double> log_priors(n_classes);
  std::vector<std::vector<double>> logprob(n_classes, std::vector<double>(vocab.size()));
  const double smoothing_total = alpha * static_cast<double>(vocab.size());
  for (std::size_t c = 0; c < n_classes; ++c) {
    log_priors[c] = std::log(static_cast<double>(mass.doc_counts[c]) / static_cast<double>(n_docs));
    const double log_denominator = std::log(smoothing_total + mass.total_mass[c]);
    for (std::size_t w = 0; w < vocab.size(); ++w) {
      logprob[c][w] = std::log(alpha + mass.word_mass[c][w]) - log_denominator;
    }
  }
  return MnbModel(mass.classes, std::move(log_priors), std::move(logprob), alpha, vocab);
}

MnbModel fit(const TfIdfMatrix& matrix, std::span<const std::string> labels, double alpha,
             const Vocabulary& vocab) {
  if (!(alpha > 0.0)) throw AlphaNonPositiveError("alpha must be > 0");
  return fit_from_mass(accumulate_class_mass(matrix, labels, vocab.size()), alpha, vocab);
}

std::size_t argmax_first(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double tol = kScoreTieTolerance * std::max(1.0, std::fabs(values[best]));
    if (values[i] > values[best] + tol) best = i;
  }
  return best;
}

ClassScores score(const MnbModel& model, const SparseRow& doc_vector) {
  ClassScores out;
  out.scores = model.log_priors();
  for (std::size_t c = 0; c < out.scores.size(); ++c) {
    const auto& lp = model.word_logprob(c);
    double s = 0.0;
    for (const auto& e : doc_vector) s += lp[e.index] * e.weight;
    out.scores[c] += s;
  }
  out.predicted = argmax_first(out.scores);
  return out;
}

std::vector<WordLogProb> word_logprob_table(const MnbModel& model, const std::string& palo) {
  const std::size_t c = model.class_index(palo);
  const auto& lp = model.word_logprob(c);
  std::vector<WordLogProb> table;
  table.reserve(lp.size());
  for (std::size_t w = 0; w < lp.size(); ++w) table.push_back({model.vocab().word(w), lp[w]});
  std::sort(table.begin(), table.end(), [](const WordLogProb& a, const WordLogProb& b) {
    return a.log_prob != b.log_prob ? a.log_prob > b.log_prob : a.word < b.word;
  });
  return table;
}

namespace {

using json = nlohmann::json;

json config_to_json(const FrozenPreprocess& prep) {
  json concat = json::array();
  for (const auto& r : prep.config.concat_map) concat.push_back({r.phrase, r.joined});
  return json{
      {"gamma", prep.config.gamma},
      {"punctuation", utf8_from_codepoints(prep.config.punctuation)},
      {"stopwords", prep.config.stopwords},
      {"concat_map", concat},
      {"lowered_keys", prep.lowered_keys},
  };
}

FrozenPreprocess config_from_json(const json& j) {
  FrozenPreprocess prep;
  prep.config.gamma = j.at("gamma").get<double>();
  prep.config.punctuation = codepoints_from_utf8(j.at("punctuation").get<std::string>());
  prep.config.stopwords = j.at("stopwords").get<std::set<std::string>>();
  for (const auto& pair : j.at("concat_map")) {
    prep.config.concat_map.push_back({pair.at(0).get<std::string>(), pair.at(1).get<std::string>()});
  }
  prep.lowered_keys = j.at("lowered_keys").get<std::set<std::string>>();
  prep.config.validate();
  return prep;
}

}  // namespace

void write_model_json(std::ostream& out, const MnbModel& model, const FrozenPreprocess& prep) {
  json j;
  j["version"] = kModelFormatVersion;
  j["classes"] = model.classes();
  json priors = json::array();
  for (std::size_t c = 0; c < model.classes().size(); ++c) priors.push_back(model.prior(c));
  j["priors"] = priors;
  j["log_priors"] = model.log_priors();
  j["alpha"] = model.alpha();
  j["vocab"] = {
      {"words", model.vocab().words()},
      {"df", model.vocab().document_frequencies()},
      {"n_docs", model.vocab().n_docs()},
  };
  json logprob = json::array();
  for (std::size_t c = 0; c < model.classes().size(); ++c) logprob.push_back(model.word_logprob(c));
  j["word_logprob"] = logprob;
  j["preprocess"] = config_to_json(prep);
  out << j.dump(1, ' ', false, json::error_handler_t::replace) << '\n';
}

void save_model(const std::filesystem::path& path, const MnbModel& model,
                const FrozenPreprocess& prep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model '" + path.string() + "'");
  write_model_json(out, model, prep);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::pair<MnbModel, FrozenPreprocess> read_model_json(std::istream& in) {
  try {
    const json j = json::parse(in);
    if (j.value("version", std::string{}) != kModelFormatVersion) {
      throw ModelFormatError(std::string("expected model version ") + kModelFormatVersion);
    }
    const auto& v = j.at("vocab");
    Vocabulary vocab(v.at("words").get<std::vector<std::string>>(),
                     v.at("df").get<std::vector<std::size_t>>(), v.at("n_docs").get<std::size_t>());
    MnbModel model(j.at("classes").get<std::vector<std::string>>(),
                   j.at("log_priors").get<std::vector<double>>(),
                   j.at("word_logprob").get<std::vector<std::vector<double>>>(),
                   j.at("alpha").get<double>(), std::move(vocab));
    return {std::move(model), config_from_json(j.at("preprocess"))};
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("malformed model file: ") + e.what());
  } catch (const ModelFormatError&) {
    throw;
  } catch (const Error& e) {
    throw ModelFormatError(std::string("inconsistent model file: ") + e.what());
  }
}

std::pair<MnbModel, FrozenPreprocess> load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model '" + path.string() + "'");
  return read_model_json(in);
}

}  // namespace lexpalo
