#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "lexpalo/error.hpp"
#include "lexpalo/lexstats.hpp"
#include "lexpalo/preprocess.hpp"
#include "support.hpp"

using namespace lexpalo;
using lexpalo::testing::corpus_of;
using lexpalo::testing::make_corpus;

namespace {

std::vector<std::string> distinct_tokens(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

std::string joined(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t + " ";
  return out;
}

double window_ttr(const std::vector<std::string>& doc, std::size_t start, std::size_t len) {
  std::set<std::string> types(doc.begin() + static_cast<std::ptrdiff_t>(start),
                              doc.begin() + static_cast<std::ptrdiff_t>(start + len));
  return static_cast<double>(types.size()) / static_cast<double>(len);
}

}  // namespace

TEST(Profile, Counts) {
  const std::vector<std::string> doc{"a", "b", "a"};
  const auto p = profile(doc);
  EXPECT_EQ(p.tokens, 3u);
  EXPECT_EQ(p.types, 2u);
  EXPECT_DOUBLE_EQ(p.ttr, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(profile(distinct_tokens(7)).ttr, 1.0);
  EXPECT_THROW(profile(std::vector<std::string>{}), EmptyDocumentError);
}

TEST(Sttr, FullLengthWindowIsWholeDocumentWithoutError) {
  const std::vector<std::string> doc{"a", "b", "a", "c", "b", "d"};
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    const auto r = sttr(doc, doc.size(), 50, seed);
    EXPECT_DOUBLE_EQ(r.mean, profile(doc).ttr);
    EXPECT_EQ(r.std_error, 0.0);
    EXPECT_EQ(r.n_windows, 1u);
    EXPECT_EQ(r.window_length, doc.size());
  }
}

TEST(Sttr, RepeatedTokenGivesInverseWindow) {
  const std::vector<std::string> doc(40, "ay");
  const auto r = sttr(doc, 8, 50, 3);
  EXPECT_DOUBLE_EQ(r.mean, 1.0 / 8.0);
  EXPECT_NEAR(r.std_error, 0.0, 1e-15);
}

TEST(Sttr, DeterministicAndValidated) {
  std::mt19937_64 gen(1);
  std::vector<std::string> doc;
  for (int i = 0; i < 300; ++i) doc.push_back("t" + std::to_string(gen() % 60));
  const auto a = sttr(doc, 40, 50, 12);
  const auto b = sttr(doc, 40, 50, 12);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_THROW(sttr(doc, 301, 5, 0), WindowTooLongError);
  EXPECT_THROW(sttr(doc, 10, 0, 0), InvalidArgumentError);
}

TEST(Sttr, MeanWithinWindowExtremes) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + gen() % 200;
    const std::size_t vocab = 1 + gen() % 40;
    std::vector<std::string> doc;
    for (std::size_t i = 0; i < n; ++i) doc.push_back("t" + std::to_string(gen() % vocab));
    const std::size_t w = 1 + gen() % n;
    const auto r = sttr(doc, w, 1 + gen() % 60, gen());
    double lo = 1.0, hi = 0.0;
    for (std::size_t s = 0; s + w <= n; ++s) {
      lo = std::min(lo, window_ttr(doc, s, w));
      hi = std::max(hi, window_ttr(doc, s, w));
    }
    EXPECT_GE(r.mean, lo - 1e-12);
    EXPECT_LE(r.mean, hi + 1e-12);
    EXPECT_GE(r.std_error, 0.0);
  }
}

TEST(Hapax, DisjointPalosAreAllHapax) {
  const Corpus c = corpus_of({{"A", {"a b", "b c"}}, {"B", {"x y", "z"}}});
  const auto r = hapax_report(c);
  ASSERT_EQ(r.per_song.size(), 4u);
  for (const auto& s : r.per_song) EXPECT_DOUBLE_EQ(s.ratio, 1.0);
  EXPECT_EQ(r.per_palo_unique.at("A"), (std::set<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(r.shared_with_essential.empty());
}

TEST(Hapax, IdenticalVocabulariesHaveNoHapax) {
  const Corpus c = corpus_of({{"A", {"a b", "c"}}, {"B", {"c b a"}}});
  const auto r = hapax_report(c);
  for (const auto& s : r.per_song) EXPECT_EQ(s.ratio, 0.0);
  for (const auto& [palo, words] : r.per_palo_unique) EXPECT_TRUE(words.empty()) << palo;
}

TEST(Hapax, RatiosSharedCountsAndInvariants) {
  const Corpus c = corpus_of({{"A", {"a b x", "a", ""}}, {"B", {"b c", "c d"}}, {"C", {"x e"}}});
  const auto r = hapax_report(c, {{"A", {"a", "b"}}, {"B", {"d", "zz"}}});
  // "a" only in A; "c", "d" only in B; "e" only in C; "b" and "x" shared.
  ASSERT_EQ(r.per_song.size(), 5u);  // the empty song is skipped
  EXPECT_EQ(r.per_song[0].id, "A-0");
  EXPECT_EQ(r.per_song[0].palo_hapax_types, 1u);
  EXPECT_EQ(r.per_song[0].types, 3u);
  EXPECT_DOUBLE_EQ(r.per_song[0].ratio, 1.0 / 3.0);
  EXPECT_EQ(r.shared_with_essential.at("A"), 1u);
  EXPECT_EQ(r.shared_with_essential.at("B"), 1u);
  EXPECT_EQ(r.shared_with_essential.at("C"), 0u);

  std::size_t total = 0;
  std::set<std::string> all;
  for (const auto& [palo, words] : r.per_palo_unique) {
    for (const auto& w : words) EXPECT_TRUE(all.insert(w).second) << "unique sets overlap on " << w;
    total += words.size();
  }
  EXPECT_LE(total, 6u);

  // Removing a palo can only grow the others' unique sets.
  const Corpus without_c = corpus_of({{"A", {"a b x", "a", ""}}, {"B", {"b c", "c d"}}});
  const auto r2 = hapax_report(without_c);
  for (const auto& [palo, words] : r2.per_palo_unique) {
    EXPECT_TRUE(std::includes(words.begin(), words.end(), r.per_palo_unique.at(palo).begin(),
                              r.per_palo_unique.at(palo).end()));
  }
  EXPECT_TRUE(r2.per_palo_unique.at("A").contains("x"));
}

TEST(PowerLaw, ExactLineRecovered) {
  std::vector<double> x, y;
  for (int i = 1; i <= 20; ++i) {
    x.push_back(i);
    y.push_back(3.0 * std::pow(i, -1.3));
  }
  const auto f = fit_power_law(x, y);
  EXPECT_NEAR(f.exponent, -1.3, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_EQ(f.n_points, 20u);
}

TEST(Zipf, RankingTiesLexicographic) {
  const Corpus c = make_corpus({{"1", "p", "b a c a b d"}});
  const auto r = rank_frequencies(c);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0].word, "a");
  EXPECT_EQ(r[1].word, "b");
  EXPECT_EQ(r[2].word, "c");
  EXPECT_EQ(r[3].word, "d");
}

TEST(Zipf, DefaultRange) {
  EXPECT_EQ(default_zipf_range(10204).first, 10u);
  EXPECT_EQ(default_zipf_range(10204).last, 1020u);
  EXPECT_EQ(default_zipf_range(50).first, 1u);  // [10, 5] is empty: full range
  EXPECT_EQ(default_zipf_range(50).last, 50u);
}

TEST(Zipf, RecoversExponentOnExactZipfCounts) {
  // f(r) = round(C / r) for r up to the last rank with f >= 1, about 1e5 tokens.
  const double C = 10000.0;
  std::string text;
  std::size_t total = 0;
  for (std::size_t r = 1; C / static_cast<double>(r) >= 1.0; ++r) {
    const auto f = static_cast<std::size_t>(std::llround(C / static_cast<double>(r)));
    for (std::size_t k = 0; k < f; ++k) text += "w" + std::to_string(r) + " ";
    total += f;
  }
  EXPECT_GT(total, 90000u);
  const auto fit = zipf_fit(make_corpus({{"1", "p", text}}));
  EXPECT_NEAR(fit.exponent, -1.0, 0.05);
}

TEST(Zipf, EqualCountsAreDegenerate) {
  EXPECT_THROW(zipf_fit(make_corpus({{"1", "p", "a b a b"}})), DegenerateFitError);
  EXPECT_THROW(zipf_fit(make_corpus({{"1", "p", "a a a"}})), DegenerateFitError);
}

TEST(Heaps, AllDistinctTokensGiveExponentOne) {
  const auto tokens = distinct_tokens(5000);
  std::vector<std::tuple<std::string, std::string, std::string>> rows;
  for (std::size_t i = 0; i < 50; ++i) {
    std::vector<std::string> part(tokens.begin() + static_cast<std::ptrdiff_t>(i * 100),
                                  tokens.begin() + static_cast<std::ptrdiff_t>((i + 1) * 100));
    rows.emplace_back("d" + std::to_string(i), "p", joined(part));
  }
  const auto h = heaps_curve(make_corpus(rows), 4);
  for (const auto& p : h.points) EXPECT_EQ(p.tokens, p.types);
  EXPECT_EQ(h.points.back().tokens, 5000u);
  EXPECT_NEAR(h.fit.exponent, 1.0, 1e-9);
  EXPECT_LE(h.points.size(), 201u);
}

TEST(Heaps, RepeatedTokenIsFlat) {
  const auto h = heaps_curve(make_corpus({{"1", "p", joined(std::vector<std::string>(300, "ay"))}}), 0);
  for (const auto& p : h.points) EXPECT_EQ(p.types, 1u);
  EXPECT_NEAR(h.fit.exponent, 0.0, 1e-12);
}

TEST(Heaps, SeedOnlyChangesRecordOrder) {
  std::vector<std::tuple<std::string, std::string, std::string>> rows;
  for (int i = 0; i < 30; ++i) rows.emplace_back("d" + std::to_string(i), "p", "x y w" + std::to_string(i % 7));
  const Corpus c = make_corpus(rows);
  const auto a = heaps_curve(c, 1), b = heaps_curve(c, 1), d = heaps_curve(c, 2);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_EQ(a.points[i].types, b.points[i].types);
  EXPECT_EQ(a.points.back().types, d.points.back().types);
}

TEST(CorpusTokens, InRecordOrder) {
  const Corpus c = make_corpus({{"1", "p", "a b"}, {"2", "q", ""}, {"3", "p", "c"}});
  EXPECT_EQ(corpus_tokens(c), (std::vector<std::string>{"a", "b", "c"}));
}
