#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "volatext/corpus.hpp"
#include "volatext/sparse.hpp"

namespace volatext {

enum class Measure { dice, llr, mi };

Measure parse_measure(std::string_view name);
std::string_view to_string(Measure measure);

struct CoocOptions {
  /// Ignore terms flagged as stopwords in the vocabulary.
  bool skip_stopwords = true;
  /// Pairs seen in fewer sentences than this are treated as absent.
  std::uint32_t min_cooc_count = 1;
  /// When non-empty, only pairs with at least one focus term are stored.
  /// Marginals are always computed for every term.
  std::vector<TermId> focus;
};

/// Sentence co-occurrence counts for one slice. counts(a, b) is the number
/// of sentences containing both a and b; marginals[a] the number containing a.
struct CoocSlice {
  std::size_t slice_index = 0;
  std::uint64_t n_sentences = 0;
  std::vector<std::uint32_t> marginals;
  SymmetricMatrix<std::uint32_t> counts;
};

/// Counts each unordered pair of distinct terms once per sentence in which
/// both occur.
CoocSlice count_cooccurrences(const TimeSlice& slice, const Vocabulary& vocab,
                              const CoocOptions& options = {});

std::vector<CoocSlice> count_all_slices(const SlicedCorpus& corpus, const CoocOptions& options,
                                        unsigned threads = 0);

/// Element-wise sum of several slices' counts, marginals and sentence totals.
CoocSlice pool_counts(std::span<const CoocSlice> slices);

// Association measures over the 2x2 sentence contingency table.
double dice_coefficient(double n_ab, double n_a, double n_b);
double log_likelihood_ratio(double n_ab, double n_a, double n_b, double n);
double pointwise_mutual_information(double n_ab, double n_a, double n_b, double n);

/// Value of `measure` for one pair, or nullopt when the pair is dropped
/// (mutual information <= 0).
std::optional<double> association(Measure measure, std::uint64_t n_ab, std::uint64_t n_a,
                                  std::uint64_t n_b, std::uint64_t n);

struct SigSlice {
  std::size_t slice_index = 0;
  Measure measure = Measure::dice;
  SymmetricMatrix<double> sig;
};

/// Significance computed over the pooled counts of every slice.
struct GlobalSig {
  Measure measure = Measure::dice;
  SymmetricMatrix<double> sig;
};

SigSlice significance(const CoocSlice& counts, Measure measure);
GlobalSig global_significance(std::span<const CoocSlice> slices, Measure measure);
GlobalSig global_significance(const SlicedCorpus& corpus, Measure measure,
                              const CoocOptions& options = {}, unsigned threads = 0);

/// Union of one row of a slice with the same row of the global statistic;
/// slice values win where both exist.
std::vector<SymmetricMatrix<double>::Entry> fill_row(std::span<const SymmetricMatrix<double>::Entry> local,
                                                     std::span<const SymmetricMatrix<double>::Entry> global);

/// Inserts the global value for every pair the slice lacks. Throws
/// std::invalid_argument if the measures differ.
SigSlice fill_gaps(const SigSlice& slice, const GlobalSig& global);

/// `term_a \t term_b \t value` per stored pair, term_a < term_b, sorted by
/// (term_a, term_b). Bit-stable.
void write_pair_tsv(std::ostream& out, const SymmetricMatrix<std::uint32_t>& m, const Vocabulary& vocab);
void write_pair_tsv(std::ostream& out, const SymmetricMatrix<double>& m, const Vocabulary& vocab);

}  // namespace volatext
