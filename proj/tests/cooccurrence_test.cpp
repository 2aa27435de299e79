#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "support/dense_oracle.hpp"
#include "volatext/cooccurrence.hpp"
#include "volatext/corpus.hpp"
#include "volatext/types.hpp"

namespace volatext {
namespace {

using oracle::ToyCorpus;

ToyCorpus toy(std::uint32_t v, std::vector<std::vector<std::vector<TermId>>> slices) {
  ToyCorpus c;
  c.vocab = v;
  c.stopword.assign(v, false);
  c.slices = std::move(slices);
  return c;
}

TEST(Cooccurrence, CountsOncePerSentence) {
  const auto corpus = oracle::to_sliced(toy(3, {{{0, 1}, {0, 1}}, {{0, 0, 1}}}));
  const auto s0 = count_cooccurrences(corpus.slices[0], corpus.vocab);
  EXPECT_EQ(s0.n_sentences, 2u);
  EXPECT_EQ(*s0.counts.find(0, 1), 2u);
  EXPECT_EQ(s0.marginals[0], 2u);
  EXPECT_EQ(s0.marginals[1], 2u);
  const auto s1 = count_cooccurrences(corpus.slices[1], corpus.vocab);
  EXPECT_EQ(*s1.counts.find(1, 0), 1u);
  EXPECT_EQ(s1.marginals[0], 1u);
  EXPECT_FALSE(s1.counts.find(0, 0));
}

TEST(Cooccurrence, EmptySliceGivesEmptyCounts) {
  const auto corpus = oracle::to_sliced(toy(3, {{}}));
  const auto c = count_cooccurrences(corpus.slices[0], corpus.vocab);
  EXPECT_EQ(c.n_sentences, 0u);
  EXPECT_TRUE(c.counts.empty());
  EXPECT_TRUE(significance(c, Measure::dice).sig.empty());
}

TEST(Cooccurrence, MatchesBruteForceOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    // At most 5 sentences of 12 tokens per slice, 4 slices: below 1000 tokens.
    const auto t = oracle::random_toy(rng, 40, 4, 5 + trial % 40, 12, trial % 3);
    const auto corpus = oracle::to_sliced(t);
    for (std::uint32_t min_count : {1u, 2u}) {
      CoocOptions opt;
      opt.min_cooc_count = min_count;
      const auto counts = count_all_slices(corpus, opt, 2);
      for (std::size_t s = 0; s < t.slices.size(); ++s) {
        const auto dense = oracle::dense_counts(t, s, min_count);
        EXPECT_EQ(counts[s].n_sentences, dense.n);
        for (TermId a = 0; a < t.vocab; ++a) {
          if (!t.stopword[a]) EXPECT_EQ(counts[s].marginals[a], dense.marginal[a]);
          for (TermId b = 0; b < t.vocab; ++b) {
            const auto got = counts[s].counts.find(a, b);
            EXPECT_EQ(got.value_or(0), dense.at(a, b)) << "slice " << s << " pair " << a << "," << b;
          }
        }
      }
    }
  }
}

TEST(Cooccurrence, FocusModeKeepsOnlyFocusPairs) {
  std::mt19937_64 rng(3);
  const auto t = oracle::random_toy(rng, 30, 2, 40, 10);
  const auto corpus = oracle::to_sliced(t);
  CoocOptions focus;
  focus.focus = {2, 5};
  for (std::size_t s = 0; s < 2; ++s) {
    const auto all = count_cooccurrences(corpus.slices[s], corpus.vocab);
    const auto some = count_cooccurrences(corpus.slices[s], corpus.vocab, focus);
    EXPECT_EQ(some.marginals, all.marginals);
    for (TermId a = 0; a < 30; ++a)
      for (TermId b = 0; b < 30; ++b) {
        const bool touches = a == 2 || a == 5 || b == 2 || b == 5;
        EXPECT_EQ(some.counts.find(a, b), touches ? all.counts.find(a, b) : std::nullopt);
      }
  }
}

TEST(Association, DiceExamples) {
  EXPECT_DOUBLE_EQ(dice_coefficient(2, 4, 6), 0.4);
  EXPECT_DOUBLE_EQ(dice_coefficient(5, 5, 5), 1.0);
  EXPECT_EQ(association(Measure::dice, 2, 4, 6, 10), 0.4);
}

TEST(Association, MutualInformationDropsIndependentPairs) {
  EXPECT_FALSE(association(Measure::mi, 2, 4, 5, 10));  // 2*10 == 4*5
  EXPECT_FALSE(association(Measure::mi, 1, 4, 5, 10));
  EXPECT_DOUBLE_EQ(*association(Measure::mi, 4, 4, 5, 10), std::log2(2.0));
}

TEST(Association, LlrAgreesWithEntropyForm) {
  for (std::uint64_t n : {10u, 50u, 1000u})
    for (std::uint64_t a = 1; a <= n; a += 3)
      for (std::uint64_t b = 1; b <= n; b += 7)
        for (std::uint64_t ab = 1; ab <= std::min(a, b); ab += 2) {
          if (a + b - ab > n) continue;
          const double want = oracle::entropy_llr(double(ab), double(a - ab), double(b - ab), double(n - a - b + ab));
          const double got = *association(Measure::llr, ab, a, b, n);
          EXPECT_GE(got, 0.0);
          EXPECT_NEAR(got, want, 1e-9 * std::max(1.0, want));
        }
  EXPECT_NEAR(log_likelihood_ratio(2, 4, 5, 10), 0.0, 1e-12);
}

TEST(Significance, MatchesDenseOracleAndIsSymmetric) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = oracle::random_toy(rng, 25, 3, 30, 8, 2);
    const auto corpus = oracle::to_sliced(t);
    const auto counts = count_all_slices(corpus, {});
    for (auto m : {Measure::dice, Measure::llr, Measure::mi}) {
      const oracle::DenseModel dense(t, m);
      for (std::size_t s = 0; s < t.slices.size(); ++s) {
        const auto sig = significance(counts[s], m);
        EXPECT_EQ(sig.measure, m);
        for (TermId a = 0; a < 25; ++a)
          for (TermId b = 0; b < 25; ++b) {
            const auto got = sig.sig.find(a, b);
            const auto want = dense.local(s)[a * 25 + b];
            ASSERT_EQ(got.has_value(), want.has_value()) << to_string(m) << " " << a << "," << b;
            if (!got) continue;
            EXPECT_EQ(got, sig.sig.find(b, a));
            if (m == Measure::llr)
              EXPECT_NEAR(*got, *want, 1e-9 * std::max(1.0, *want));
            else
              EXPECT_EQ(*got, *want);
            if (m == Measure::dice) {
              EXPECT_GT(*got, 0.0);
              EXPECT_LE(*got, 1.0);
            }
          }
      }
    }
  }
}

TEST(Significance, GlobalEqualsConcatenatedCorpus) {
  std::mt19937_64 rng(5);
  auto t = oracle::random_toy(rng, 20, 2, 25, 6);
  const auto corpus = oracle::to_sliced(t);
  const auto global = global_significance(corpus, Measure::dice);

  ToyCorpus joined = t;
  joined.slices = {t.slices[0]};
  joined.slices[0].insert(joined.slices[0].end(), t.slices[1].begin(), t.slices[1].end());
  const auto one = oracle::to_sliced(joined);
  const auto concat = significance(count_cooccurrences(one.slices[0], one.vocab), Measure::dice);
  EXPECT_EQ(global.sig, concat.sig);

  // Single-slice corpus: the global statistic is that slice.
  EXPECT_EQ(global_significance(one, Measure::dice).sig, concat.sig);
}

TEST(Significance, GlobalSupportIsUnionOfSlices) {
  const auto corpus = oracle::to_sliced(toy(5, {{{0, 1}}, {}, {{2, 3}}, {{0, 1}, {3, 4}}}));
  const auto g = global_significance(corpus, Measure::llr);
  EXPECT_EQ(g.sig.pair_count(), 3u);
  EXPECT_TRUE(g.sig.find(2, 3));
  EXPECT_TRUE(g.sig.find(4, 3));
  EXPECT_FALSE(g.sig.find(0, 2));
}

TEST(FillGaps, UnionWithSlicePriority) {
  std::mt19937_64 rng(9);
  const auto t = oracle::random_toy(rng, 20, 4, 20, 6);
  const auto corpus = oracle::to_sliced(t);
  const auto counts = count_all_slices(corpus, {});
  const auto global = global_significance(counts, Measure::dice);
  for (const auto& c : counts) {
    const auto local = significance(c, Measure::dice);
    const auto filled = fill_gaps(local, global);
    for (TermId a = 0; a < 20; ++a)
      for (TermId b = 0; b < 20; ++b) {
        const auto l = local.sig.find(a, b);
        const auto g = global.sig.find(a, b);
        EXPECT_EQ(filled.sig.find(a, b), l ? l : g);
      }
    EXPECT_EQ(filled.sig.pair_count(), global.sig.pair_count());
  }
}

TEST(FillGaps, EmptySliceTakesAllGlobalValues) {
  const auto corpus = oracle::to_sliced(toy(4, {{{0, 1, 2}}, {}}));
  const auto counts = count_all_slices(corpus, {});
  const auto global = global_significance(counts, Measure::dice);
  const auto filled = fill_gaps(significance(counts[1], Measure::dice), global);
  EXPECT_EQ(filled.sig, global.sig);
  EXPECT_EQ(filled.sig.pair_count(), 3u);
  EXPECT_THROW(fill_gaps(significance(counts[1], Measure::mi), global), std::invalid_argument);
}

TEST(SymmetricMatrixTest, RejectsBadInput) {
  using M = SymmetricMatrix<int>;
  const M::Triple dup[] = {{0, 1, 1}, {0, 1, 2}};
  EXPECT_THROW(M::from_pairs(3, dup), std::invalid_argument);
  const M::Triple unordered[] = {{1, 0, 1}};
  EXPECT_THROW(M::from_pairs(3, unordered), std::invalid_argument);
  const M::Triple out_of_range[] = {{0, 3, 1}};
  EXPECT_THROW(M::from_pairs(3, out_of_range), std::invalid_argument);
}

TEST(PairTsv, SortedAndStable) {
  const auto corpus = oracle::to_sliced(toy(4, {{{3, 1, 0}, {2, 1}}}));
  const auto c = count_cooccurrences(corpus.slices[0], corpus.vocab);
  std::ostringstream out;
  write_pair_tsv(out, c.counts, corpus.vocab);
  EXPECT_EQ(out.str(), "t000\tt001\t1\nt000\tt003\t1\nt001\tt002\t1\nt001\tt003\t1\n");
  std::ostringstream sig;
  write_pair_tsv(sig, significance(c, Measure::dice).sig, corpus.vocab);
  EXPECT_EQ(sig.str().substr(0, 15), "t000\tt001\t0.666");
}

TEST(MeasureNames, RoundTrip) {
  for (auto m : {Measure::dice, Measure::llr, Measure::mi}) EXPECT_EQ(parse_measure(to_string(m)), m);
  EXPECT_THROW(parse_measure("jaccard"), ConfigError);
}

}  // namespace
}  // namespace volatext
