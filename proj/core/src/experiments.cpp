#include "lexpalo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "lexpalo/error.hpp"
#include "lexpalo/parallel.hpp"
#include "lexpalo/preprocess.hpp"
#include "lexpalo/random.hpp"

namespace lexpalo {

PreparedSplit prepare_split(const Corpus& corpus, const SplitSpec& split) {
  const Split parts = stratified_split(corpus, split);
  PreparedSplit p;
  p.seed = split.seed;
  p.vocab = build_vocabulary(parts.train);
  const TfIdfMatrix train_matrix = tfidf(parts.train, p.vocab);
  const auto labels = parts.train.labels();
  p.mass = accumulate_class_mass(train_matrix, labels, p.vocab.size());

  const TfIdfMatrix val_matrix = tfidf(parts.validation, p.vocab);
  p.validation_rows = val_matrix.rows;
  for (const auto& r : parts.validation.records()) {
    auto it = std::lower_bound(p.mass.classes.begin(), p.mass.classes.end(), r.palo);
    if (it == p.mass.classes.end() || *it != r.palo) {
      throw LabelMismatchError("validation palo '" + r.palo + "' missing from training");
    }
    p.validation_truth.push_back(static_cast<std::size_t>(it - p.mass.classes.begin()));
  }
  return p;
}

TrainingResult evaluate_split(const PreparedSplit& prepared, double alpha) {
  TrainingResult result;
  result.seed = prepared.seed;
  result.model = fit_from_mass(prepared.mass, alpha, prepared.vocab);
  result.classes = result.model.classes();
  const std::size_t k = result.classes.size();
  result.confusion.assign(k, std::vector<std::size_t>(k, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < prepared.validation_rows.size(); ++i) {
    const std::size_t truth = prepared.validation_truth[i];
    const std::size_t predicted = score(result.model, prepared.validation_rows[i]).predicted;
    ++result.confusion[truth][predicted];
    correct += truth == predicted ? 1 : 0;
  }
  result.per_class_accuracy.assign(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    const auto row_total =
        std::accumulate(result.confusion[c].begin(), result.confusion[c].end(), std::size_t{0});
    if (row_total > 0) {
      result.per_class_accuracy[c] =
          static_cast<double>(result.confusion[c][c]) / static_cast<double>(row_total);
    }
  }
  const auto n = prepared.validation_rows.size();
  result.global_accuracy = n > 0 ? static_cast<double>(correct) / static_cast<double>(n) : 0.0;
  return result;
}

TrainingResult run_training(const Corpus& corpus, double alpha, const SplitSpec& split) {
  if (!(alpha > 0.0)) throw AlphaNonPositiveError("alpha must be > 0");
  return evaluate_split(prepare_split(corpus, split), alpha);
}

std::vector<TrainingResult> run_trainings(const Corpus& corpus, double alpha, std::size_t n_runs,
                                          const SplitSpec& split, unsigned threads) {
  if (!(alpha > 0.0)) throw AlphaNonPositiveError("alpha must be > 0");
  std::vector<TrainingResult> out;
  out.reserve(n_runs);
  ordered_parallel(
      n_runs, resolve_thread_count(threads),
      [&](std::size_t i) {
        return run_training(corpus, alpha, {split.train_fraction, run_seed(split.seed, i)});
      },
      [&](std::size_t, TrainingResult r) { out.push_back(std::move(r)); });
  return out;
}

AggregateReport aggregate(const std::vector<TrainingResult>& runs) {
  if (runs.empty()) throw InvalidArgumentError("cannot aggregate zero runs");
  AggregateReport rep;
  rep.n_runs = runs.size();
  rep.classes = runs.front().classes;
  const std::size_t k = rep.classes.size();
  rep.mean_accuracy.assign(k, 0.0);
  rep.accuracy_samples.assign(k, {});
  rep.mean_confusion.assign(k, std::vector<double>(k, 0.0));

  for (const auto& run : runs) {
    if (run.classes != rep.classes) throw InconsistentClassesError("runs disagree on the class set");
    rep.mean_global_accuracy += run.global_accuracy;
    for (std::size_t c = 0; c < k; ++c) {
      rep.accuracy_samples[c].push_back(run.per_class_accuracy[c]);
      const auto total = std::accumulate(run.confusion[c].begin(), run.confusion[c].end(), std::size_t{0});
      if (total == 0) continue;
      for (std::size_t p = 0; p < k; ++p) {
        rep.mean_confusion[c][p] += static_cast<double>(run.confusion[c][p]) / static_cast<double>(total);
      }
    }
  }
  const double n = static_cast<double>(runs.size());
  rep.mean_global_accuracy /= n;
  for (std::size_t c = 0; c < k; ++c) {
    for (double a : rep.accuracy_samples[c]) rep.mean_accuracy[c] += a;
    rep.mean_accuracy[c] /= n;
    for (auto& v : rep.mean_confusion[c]) v /= n;
  }

  rep.confusion_only = rep.mean_confusion;
  rep.no_confusion.assign(k, false);
  for (std::size_t c = 0; c < k; ++c) {
    auto& row = rep.confusion_only[c];
    row[c] = 0.0;
    const double off = std::accumulate(row.begin(), row.end(), 0.0);
    if (off > 0.0) {
      for (auto& v : row) v /= off;
    } else {
      rep.no_confusion[c] = true;
    }
  }
  return rep;
}

std::vector<double> alpha_grid(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw InvalidArgumentError("grid step must lie in (0, 1]");
  std::vector<double> grid;
  const auto steps = static_cast<std::size_t>(std::floor(1.0 / grid_step + 1e-9));
  for (std::size_t k = 1; k <= steps; ++k) grid.push_back(static_cast<double>(k) * grid_step);
  return grid;
}

AlphaSweepResult alpha_sweep(const Corpus& corpus, double grid_step, std::size_t n_runs,
                             const SplitSpec& split, unsigned threads) {
  if (n_runs == 0) throw InvalidArgumentError("alpha sweep needs at least one run");
  AlphaSweepResult res;
  res.grid = alpha_grid(grid_step);
  res.run_accuracy.assign(res.grid.size(), std::vector<double>(n_runs, 0.0));
  ordered_parallel(
      n_runs, resolve_thread_count(threads),
      [&](std::size_t i) {
        const PreparedSplit prepared =
            prepare_split(corpus, {split.train_fraction, run_seed(split.seed, i)});
        std::vector<double> acc;
        acc.reserve(res.grid.size());
        for (double alpha : res.grid) acc.push_back(evaluate_split(prepared, alpha).global_accuracy);
        return acc;
      },
      [&](std::size_t i, std::vector<double> acc) {
        for (std::size_t g = 0; g < acc.size(); ++g) res.run_accuracy[g][i] = acc[g];
      });

  res.mean_accuracy.assign(res.grid.size(), 0.0);
  for (std::size_t g = 0; g < res.grid.size(); ++g) {
    for (double a : res.run_accuracy[g]) res.mean_accuracy[g] += a;
    res.mean_accuracy[g] /= static_cast<double>(n_runs);
  }
  const std::size_t best = argmax_first(res.mean_accuracy);
  res.best_alpha = res.grid[best];
  res.best_accuracy = res.mean_accuracy[best];
  return res;
}

namespace {

// One run's contribution to the essential-word statistics, over the
// corpus-wide word list.
struct FloorSnapshot {
  std::vector<std::vector<double>> prob;     // [class][global word]
  std::vector<std::vector<char>> at_floor;   // [class][global word]
};

}  // namespace

EssentialWordReport essential_words(const Corpus& corpus, double alpha, std::size_t n_runs,
                                    const SplitSpec& split, double epsilon, unsigned threads) {
  if (n_runs < 2) throw InvalidArgumentError("essential-word extraction needs at least 2 runs");
  if (!(alpha > 0.0)) throw AlphaNonPositiveError("alpha must be > 0");
  if (!(epsilon >= 0.0)) throw InvalidArgumentError("epsilon must be >= 0");

  const Vocabulary global = build_vocabulary(corpus);
  const std::size_t n_words = global.size();
  const std::vector<std::string> classes = corpus.palos();
  const std::size_t k = classes.size();

  std::vector<std::vector<double>> sum_prob(k, std::vector<double>(n_words, 0.0));
  std::vector<std::vector<char>> ever_floor(k, std::vector<char>(n_words, 0));

  ordered_parallel(
      n_runs, resolve_thread_count(threads),
      [&](std::size_t i) {
        const PreparedSplit prepared =
            prepare_split(corpus, {split.train_fraction, run_seed(split.seed, i)});
        const MnbModel model = fit_from_mass(prepared.mass, alpha, prepared.vocab);
        if (model.classes() != classes) throw InconsistentClassesError("training split lost a palo");

        // Position of each run word in the global list (both sorted).
        std::vector<std::size_t> to_global(prepared.vocab.size());
        for (std::size_t w = 0; w < prepared.vocab.size(); ++w) {
          to_global[w] = *global.find(prepared.vocab.word(w));
        }
        const double log_alpha = std::log(alpha);
        const double smoothing_total = alpha * static_cast<double>(prepared.vocab.size());

        FloorSnapshot snap;
        snap.prob.assign(k, {});
        snap.at_floor.assign(k, {});
        for (std::size_t c = 0; c < k; ++c) {
          const auto& lp = model.word_logprob(c);
          const double floor_value =
              std::exp(log_alpha - std::log(smoothing_total + prepared.mass.total_mass[c]));
          const double min_log = *std::min_element(lp.begin(), lp.end());
          const double cutoff = min_log + std::log1p(epsilon);
          auto& prob = snap.prob[c];
          auto& flag = snap.at_floor[c];
          prob.assign(n_words, floor_value);
          flag.assign(n_words, 1);
          for (std::size_t w = 0; w < lp.size(); ++w) {
            prob[to_global[w]] = std::exp(lp[w]);
            flag[to_global[w]] = lp[w] <= cutoff ? 1 : 0;
          }
        }
        return snap;
      },
      [&](std::size_t, FloorSnapshot snap) {
        for (std::size_t c = 0; c < k; ++c) {
          for (std::size_t w = 0; w < n_words; ++w) {
            sum_prob[c][w] += snap.prob[c][w];
            ever_floor[c][w] |= snap.at_floor[c][w];
          }
        }
      });

  EssentialWordReport rep;
  rep.classes = classes;
  rep.n_runs = n_runs;
  rep.per_palo.resize(k);
  rep.threshold_word.resize(k);
  rep.counts.assign(k, 0);
  rep.vocab_sizes.assign(k, 0);
  rep.normalized.assign(k, 0.0);

  const auto aggregates = concat_by_palo(corpus);
  for (std::size_t c = 0; c < k; ++c) {
    const auto toks = split_tokens(aggregates.at(classes[c]).text);
    rep.vocab_sizes[c] = std::unordered_set<std::string>(toks.begin(), toks.end()).size();

    const auto& sums = sum_prob[c];
    std::vector<std::size_t> order(n_words);
    std::iota(order.begin(), order.end(), 0);
    // Global indices follow lexicographic order, so index breaks ties.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sums[a] > sums[b]; });
    const auto threshold = std::find_if(order.begin(), order.end(),
                                        [&](std::size_t w) { return ever_floor[c][w] != 0; });
    if (threshold == order.end()) {
      throw NoThresholdError("no word of palo '" + classes[c] + "' ever reached the floor");
    }
    rep.threshold_word[c] = global.word(*threshold);
    const double threshold_sum = sums[*threshold];
    for (auto it = order.begin(); it != threshold; ++it) {
      if (sums[*it] > threshold_sum) rep.per_palo[c].push_back(global.word(*it));
    }
    rep.counts[c] = rep.per_palo[c].size();
    if (rep.vocab_sizes[c] > 0) {
      rep.normalized[c] = static_cast<double>(rep.counts[c]) / static_cast<double>(rep.vocab_sizes[c]);
    }
  }
  return rep;
}

}  // namespace lexpalo
