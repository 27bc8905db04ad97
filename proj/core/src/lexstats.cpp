#include "lexpalo/lexstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "lexpalo/error.hpp"
#include "lexpalo/preprocess.hpp"
#include "lexpalo/random.hpp"

namespace lexpalo {

namespace {

double window_ttr(std::span<const std::string> window) {
  std::unordered_set<std::string_view> types;
  types.reserve(window.size());
  for (const auto& t : window) types.insert(t);
  return static_cast<double>(types.size()) / static_cast<double>(window.size());
}

}  // namespace

LexicalProfile profile(std::span<const std::string> document) {
  if (document.empty()) throw EmptyDocumentError("cannot profile an empty document");
  std::unordered_set<std::string_view> types;
  for (const auto& t : document) types.insert(t);
  LexicalProfile p;
  p.tokens = document.size();
  p.types = types.size();
  p.ttr = static_cast<double>(p.types) / static_cast<double>(p.tokens);
  return p;
}

SttrResult sttr(std::span<const std::string> document, std::size_t window_length,
                std::size_t n_windows, std::uint64_t seed) {
  if (window_length == 0) throw InvalidArgumentError("window_length must be positive");
  if (n_windows == 0) throw InvalidArgumentError("n_windows must be positive");
  if (window_length > document.size()) {
    throw WindowTooLongError("window of " + std::to_string(window_length) +
                             " tokens exceeds document of " + std::to_string(document.size()));
  }
  SttrResult result;
  result.window_length = window_length;
  if (window_length == document.size()) {
    result.mean = window_ttr(document);
    result.n_windows = 1;
    return result;
  }

  Rng rng(seed);
  const std::size_t n_offsets = document.size() - window_length + 1;
  std::vector<double> ttrs;
  ttrs.reserve(n_windows);
  for (std::size_t i = 0; i < n_windows; ++i) {
    const auto start = static_cast<std::size_t>(rng.uniform_index(n_offsets));
    ttrs.push_back(window_ttr(document.subspan(start, window_length)));
  }
  const double n = static_cast<double>(n_windows);
  result.n_windows = n_windows;
  result.mean = std::accumulate(ttrs.begin(), ttrs.end(), 0.0) / n;
  if (n_windows > 1) {
    double ss = 0.0;
    for (double t : ttrs) ss += (t - result.mean) * (t - result.mean);
    result.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return result;
}

std::vector<std::string> corpus_tokens(const Corpus& corpus) {
  std::vector<std::string> out;
  for (const auto& r : corpus.records()) {
    auto toks = split_tokens(r.text);
    out.insert(out.end(), std::make_move_iterator(toks.begin()), std::make_move_iterator(toks.end()));
  }
  return out;
}

HapaxReport hapax_report(const Corpus& corpus) { return hapax_report(corpus, {}); }

HapaxReport hapax_report(const Corpus& corpus,
                         const std::map<std::string, std::vector<std::string>>& essential) {
  // word -> the single palo using it, or empty once a second palo shows up.
  std::unordered_map<std::string, std::string> owner;
  std::unordered_set<std::string> shared;
  for (const auto& r : corpus.records()) {
    for (auto& tok : split_tokens(r.text)) {
      if (shared.contains(tok)) continue;
      auto [it, inserted] = owner.emplace(tok, r.palo);
      if (!inserted && it->second != r.palo) {
        shared.insert(tok);
        owner.erase(it);
      }
    }
  }

  HapaxReport report;
  for (const auto& palo : corpus.palos()) report.per_palo_unique[palo];
  for (const auto& [word, palo] : owner) report.per_palo_unique[palo].insert(word);

  for (const auto& r : corpus.records()) {
    const auto toks = split_tokens(r.text);
    if (toks.empty()) continue;
    std::set<std::string> types(toks.begin(), toks.end());
    const auto& unique = report.per_palo_unique.at(r.palo);
    SongHapax s{r.id, r.palo, 0, types.size(), 0.0};
    for (const auto& t : types) s.palo_hapax_types += unique.contains(t) ? 1 : 0;
    s.ratio = static_cast<double>(s.palo_hapax_types) / static_cast<double>(s.types);
    report.per_song.push_back(std::move(s));
  }

  if (!essential.empty()) {
    for (const auto& [palo, unique] : report.per_palo_unique) {
      std::size_t count = 0;
      if (auto it = essential.find(palo); it != essential.end()) {
        const std::set<std::string> words(it->second.begin(), it->second.end());
        for (const auto& w : words) count += unique.contains(w) ? 1 : 0;
      }
      report.shared_with_essential[palo] = count;
    }
  }
  return report;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgumentError("x and y differ in length");
  if (x.size() < 2) throw DegenerateFitError("a power-law fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw InvalidArgumentError("power-law fit needs positive data");
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx, dy = std::log(y[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DegenerateFitError("all x values are equal");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  const double ss_res = std::max(0.0, syy - fit.exponent * sxy);
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.range_min = *std::min_element(x.begin(), x.end());
  fit.range_max = *std::max_element(x.begin(), x.end());
  fit.n_points = x.size();
  return fit;
}

std::vector<RankedType> rank_frequencies(const Corpus& corpus) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& r : corpus.records()) {
    for (auto& tok : split_tokens(r.text)) ++counts[std::move(tok)];
  }
  std::vector<RankedType> out;
  out.reserve(counts.size());
  for (auto& [w, c] : counts) out.push_back({w, c});
  std::sort(out.begin(), out.end(), [](const RankedType& a, const RankedType& b) {
    return a.frequency != b.frequency ? a.frequency > b.frequency : a.word < b.word;
  });
  return out;
}

RankRange default_zipf_range(std::size_t n_types) {
  const RankRange preferred{10, n_types / 10};
  if (preferred.last >= preferred.first + 2) return preferred;
  return {1, n_types};
}

PowerLawFit zipf_fit(const Corpus& corpus, std::optional<RankRange> range) {
  const auto ranked = rank_frequencies(corpus);
  if (ranked.size() < 2) throw DegenerateFitError("Zipf fit needs at least two types");
  RankRange r = range.value_or(default_zipf_range(ranked.size()));
  r.first = std::max<std::size_t>(r.first, 1);
  r.last = std::min(r.last, ranked.size());
  if (r.last < r.first + 1) throw DegenerateFitError("Zipf fit range holds fewer than two ranks");

  std::vector<double> x, y;
  for (std::size_t rank = r.first; rank <= r.last; ++rank) {
    x.push_back(static_cast<double>(rank));
    y.push_back(static_cast<double>(ranked[rank - 1].frequency));
  }
  if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); })) {
    throw DegenerateFitError("all frequencies in the Zipf fit range are equal");
  }
  return fit_power_law(x, y);
}

HeapsCurve heaps_curve(const Corpus& corpus, std::uint64_t seed, std::size_t n_checkpoints) {
  if (n_checkpoints < 2) throw InvalidArgumentError("need at least two Heaps checkpoints");
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<std::string> stream;
  for (std::size_t i : order) {
    auto toks = split_tokens(corpus[i].text);
    stream.insert(stream.end(), std::make_move_iterator(toks.begin()), std::make_move_iterator(toks.end()));
  }
  if (stream.empty()) throw EmptyCorpusError("corpus has no tokens");

  const double log_total = std::log(static_cast<double>(stream.size()));
  std::vector<std::size_t> checkpoints;
  for (std::size_t k = 0; k < n_checkpoints; ++k) {
    const double l = std::exp(log_total * static_cast<double>(k) / static_cast<double>(n_checkpoints - 1));
    const auto c = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(l)), 1, stream.size());
    if (checkpoints.empty() || c > checkpoints.back()) checkpoints.push_back(c);
  }
  if (checkpoints.back() != stream.size()) checkpoints.push_back(stream.size());

  HeapsCurve curve;
  std::unordered_set<std::string_view> seen;
  std::size_t next = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    seen.insert(stream[i]);
    if (i + 1 == checkpoints[next]) {
      curve.points.push_back({i + 1, seen.size()});
      ++next;
    }
  }

  std::vector<double> x, y;
  const double tail_start = static_cast<double>(stream.size()) / 10.0;
  for (const auto& p : curve.points) {
    if (static_cast<double>(p.tokens) >= tail_start) {
      x.push_back(static_cast<double>(p.tokens));
      y.push_back(static_cast<double>(p.types));
    }
  }
  if (x.size() < 2) {
    x.clear();
    y.clear();
    for (const auto& p : curve.points) {
      x.push_back(static_cast<double>(p.tokens));
      y.push_back(static_cast<double>(p.types));
    }
  }
  curve.fit = fit_power_law(x, y);
  return curve;
}

}  // namespace lexpalo
