#pragma once

// Multinomial Naive Bayes with Lidstone smoothing over TF-IDF features.
//
//   P(w|C)     = (alpha + sum_{d in C} T(w,d)) / sum_{w'} (alpha + sum_{d in C} T(w',d))
//   Score(C|d) = log P(C) + sum_{w in d} log P(w|C) * T(w,d)
//
// Everything is kept in log space.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexpalo/preprocess.hpp"
#include "lexpalo/vectorize.hpp"

namespace lexpalo {

/// Per-class TF-IDF mass: sum over the class's rows of each word's weight.
/// Kept separate from the smoothing so one fit can be re-smoothed cheaply.
struct ClassMass {
  std::vector<std::string> classes;            // sorted
  std::vector<std::size_t> doc_counts;         // training rows per class
  std::vector<std::vector<double>> word_mass;  // classes x |V|
  std::vector<double> total_mass;              // row sums of word_mass
};

/// Skips empty rows. Throws LabelMismatchError when labels and rows differ in
/// length or a class has no non-empty row.
ClassMass accumulate_class_mass(const TfIdfMatrix& matrix, std::span<const std::string> labels,
                                std::size_t vocab_size);

class MnbModel {
 public:
  MnbModel() = default;
  MnbModel(std::vector<std::string> classes, std::vector<double> log_priors,
           std::vector<std::vector<double>> word_logprob, double alpha, Vocabulary vocab);

  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<double>& log_priors() const noexcept { return log_priors_; }
  double prior(std::size_t c) const;
  /// log P(w|C) for class index c, one entry per vocabulary word.
  const std::vector<double>& word_logprob(std::size_t c) const { return word_logprob_[c]; }
  double alpha() const noexcept { return alpha_; }
  const Vocabulary& vocab() const noexcept { return vocab_; }

  /// Index of `palo`; throws UnknownClassError.
  std::size_t class_index(const std::string& palo) const;

 private:
  std::vector<std::string> classes_;
  std::vector<double> log_priors_;
  std::vector<std::vector<double>> word_logprob_;
  double alpha_ = 0.0;
  Vocabulary vocab_;
};

/// Smooths precomputed class mass. Priors are class document frequencies.
MnbModel fit_from_mass(const ClassMass& mass, double alpha, const Vocabulary& vocab);

/// Fits on the non-empty rows of `matrix`. Throws AlphaNonPositiveError for
/// alpha <= 0 and LabelMismatchError on inconsistent labels.
MnbModel fit(const TfIdfMatrix& matrix, std::span<const std::string> labels, double alpha,
             const Vocabulary& vocab);

struct ClassScores {
  std::vector<double> scores;  // aligned with model.classes()
  std::size_t predicted = 0;   // argmax; ties go to the earlier class
};

/// Scores a row indexed against model.vocab(). An empty row yields the log priors.
ClassScores score(const MnbModel& model, const SparseRow& doc_vector);

/// Relative gap below which two scores count as tied. Classes with identical
/// statistics can otherwise differ by an ulp from summation order.
inline constexpr double kScoreTieTolerance = 1e-12;

/// Index of the first maximal element; values within kScoreTieTolerance
/// (relative, at least absolute) of the running best do not replace it.
std::size_t argmax_first(std::span<const double> values);

struct WordLogProb {
  std::string word;
  double log_prob;
};

/// Descending log P(w|C); ties broken lexicographically.
std::vector<WordLogProb> word_logprob_table(const MnbModel& model, const std::string& palo);

/// Preprocessing state a saved model needs to classify raw text.
struct FrozenPreprocess {
  PreprocessConfig config;
  std::set<std::string> lowered_keys;
};

/// Writes the "mnb-v1" JSON document.
void write_model_json(std::ostream& out, const MnbModel& model, const FrozenPreprocess& prep);
void save_model(const std::filesystem::path& path, const MnbModel& model,
                const FrozenPreprocess& prep);

/// Throws ModelFormatError on a malformed or foreign document.
std::pair<MnbModel, FrozenPreprocess> read_model_json(std::istream& in);
std::pair<MnbModel, FrozenPreprocess> load_model(const std::filesystem::path& path);

inline constexpr const char* kModelFormatVersion = "mnb-v1";

}  // namespace lexpalo
