#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "lexpalo/corpus.hpp"
#include "lexpalo/experiments.hpp"
#include "lexpalo/genre_graph.hpp"
#include "lexpalo/mnb.hpp"
#include "lexpalo/preprocess.hpp"
#include "lexpalo/vectorize.hpp"

namespace {

using namespace lexpalo;

// Synthetic corpus with Spanish-looking text, accents and punctuation.
Corpus synthetic(std::size_t n_records, std::size_t n_palos, std::uint64_t seed) {
  static const std::vector<std::string> words{
      "Cádiz", "pena", "¡ay!", "la", "de", "mar", "niña", "Triana", "corazón", "que", "quiero", "llorar",
      "Santa Ana", "compás,", "gitana", "luna", "sal", "Jerez", "mi", "madre", "olé", "por", "tu", "querer"};
  std::mt19937_64 gen(seed);
  std::vector<LyricRecord> records;
  for (std::size_t i = 0; i < n_records; ++i) {
    std::string text;
    const std::size_t palo = i % n_palos;
    const std::size_t len = 20 + gen() % 80;
    for (std::size_t k = 0; k < len; ++k) {
      text += words[(gen() % words.size() + palo * (gen() % 3)) % words.size()];
      text += k % 9 == 8 ? "\n" : " ";
      if (gen() % 5 == 0) text += "w" + std::to_string(palo * 50 + gen() % 300) + " ";
    }
    records.push_back({"r" + std::to_string(i), text, "palo" + std::to_string(palo), {}});
  }
  return Corpus(std::move(records));
}

void BM_Preprocess(benchmark::State& state) {
  const Corpus c = synthetic(static_cast<std::size_t>(state.range(0)), 8, 1);
  const auto config = PreprocessConfig::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(preprocess_corpus(c, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Preprocess)->Arg(250)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_TfIdfAndFit(benchmark::State& state) {
  const Corpus c = preprocess_corpus(synthetic(static_cast<std::size_t>(state.range(0)), 8, 2),
                                     PreprocessConfig::defaults());
  const auto labels = c.labels();
  for (auto _ : state) {
    const Vocabulary v = build_vocabulary(c);
    const TfIdfMatrix m = tfidf(c, v);
    benchmark::DoNotOptimize(fit(m, labels, 0.11, v));
  }
}
BENCHMARK(BM_TfIdfAndFit)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Score(benchmark::State& state) {
  const Corpus c = preprocess_corpus(synthetic(2000, 8, 3), PreprocessConfig::defaults());
  const Vocabulary v = build_vocabulary(c);
  const TfIdfMatrix m = tfidf(c, v);
  const auto labels = c.labels();
  const MnbModel model = fit(m, labels, 0.11, v);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(score(model, m.rows[i++ % m.rows.size()]));
}
BENCHMARK(BM_Score);

void BM_RunTraining(benchmark::State& state) {
  const Corpus c = preprocess_corpus(synthetic(2000, 8, 4), PreprocessConfig::defaults());
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_training(c, 0.11, {0.85, seed++}));
}
BENCHMARK(BM_RunTraining)->Unit(benchmark::kMillisecond);

void BM_MinimumSpanningTree(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DistanceMatrix m;
  m.values.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    m.labels.push_back("n" + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) m.values[i][j] = m.values[j][i] = u(gen);
  }
  for (auto _ : state) benchmark::DoNotOptimize(minimum_spanning_tree(m));
}
BENCHMARK(BM_MinimumSpanningTree)->Arg(8)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
