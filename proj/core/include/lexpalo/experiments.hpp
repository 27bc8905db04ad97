#pragma once

// Repeated-training harness: stratified splits, per-class accuracy and
// confusion statistics, smoothing sweeps and essential-word extraction.
//
// Run i of a batch uses the split seed run_seed(master, i). Runs may execute
// concurrently (see parallel.hpp) but are always reduced in index order, so
// results do not depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lexpalo/corpus.hpp"
#include "lexpalo/mnb.hpp"
#include "lexpalo/vectorize.hpp"

namespace lexpalo {

using CountMatrix = std::vector<std::vector<std::size_t>>;
using RealMatrix = std::vector<std::vector<double>>;

struct TrainingResult {
  std::uint64_t seed = 0;
  std::vector<std::string> classes;
  std::vector<double> per_class_accuracy;  // aligned with classes
  double global_accuracy = 0.0;
  CountMatrix confusion;  // [true][predicted]
  MnbModel model;
};

/// A split turned into everything a fit needs except the smoothing.
struct PreparedSplit {
  std::uint64_t seed = 0;
  Vocabulary vocab;
  ClassMass mass;
  std::vector<SparseRow> validation_rows;
  std::vector<std::size_t> validation_truth;  // class indices into mass.classes
};

PreparedSplit prepare_split(const Corpus& corpus, const SplitSpec& split);

/// Fits at `alpha` and scores every validation document.
TrainingResult evaluate_split(const PreparedSplit& prepared, double alpha);

/// split -> vocabulary on train -> TF-IDF -> fit -> score validation.
TrainingResult run_training(const Corpus& corpus, double alpha, const SplitSpec& split);

/// `n_runs` trainings with seeds run_seed(split.seed, i).
std::vector<TrainingResult> run_trainings(const Corpus& corpus, double alpha, std::size_t n_runs,
                                          const SplitSpec& split, unsigned threads = 0);

struct AggregateReport {
  std::size_t n_runs = 0;
  std::vector<std::string> classes;
  std::vector<double> mean_accuracy;                 // per class
  std::vector<std::vector<double>> accuracy_samples;  // per class, one per run
  double mean_global_accuracy = 0.0;
  RealMatrix mean_confusion;   // mean of per-run row-normalized matrices
  RealMatrix confusion_only;   // diagonal removed, rows renormalized
  std::vector<bool> no_confusion;  // rows with no off-diagonal mass (left all zero)
};

/// Throws InconsistentClassesError when runs disagree on the class list.
AggregateReport aggregate(const std::vector<TrainingResult>& runs);

struct AlphaSweepResult {
  std::vector<double> grid;
  std::vector<double> mean_accuracy;               // per grid value
  std::vector<std::vector<double>> run_accuracy;   // [grid][run]
  double best_alpha = 0.0;                         // ties -> smallest alpha
  double best_accuracy = 0.0;
};

/// grid_step, 2*grid_step, ... <= 1. The same n_runs splits serve every alpha.
std::vector<double> alpha_grid(double grid_step);
AlphaSweepResult alpha_sweep(const Corpus& corpus, double grid_step, std::size_t n_runs,
                             const SplitSpec& split, unsigned threads = 0);

struct EssentialWordReport {
  std::vector<std::string> classes;
  std::vector<std::vector<std::string>> per_palo;   // essential words, best first
  std::vector<std::string> threshold_word;          // first word ever at the floor
  std::vector<std::size_t> counts;                  // N_e
  std::vector<std::size_t> vocab_sizes;             // |V| of each palo's aggregate
  std::vector<double> normalized;                   // N_e / |V|
  std::size_t n_runs = 0;
};

/// Default relative tolerance for "at the smoothing floor".
inline constexpr double kFloorEpsilon = 1e-9;

/// Ranks words by mean P(w|C) over `n_runs` trainings (absent words count at
/// the run's floor), finds the best-ranked word that sat at the floor in some
/// run, and keeps every word ranked strictly above it. Needs n_runs >= 2.
EssentialWordReport essential_words(const Corpus& corpus, double alpha, std::size_t n_runs,
                                    const SplitSpec& split, double epsilon = kFloorEpsilon,
                                    unsigned threads = 0);

}  // namespace lexpalo
