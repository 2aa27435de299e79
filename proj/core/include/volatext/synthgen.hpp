#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "volatext/corpus.hpp"

namespace volatext {

inline constexpr std::size_t kFactorCount = 7;

/// How many context changes a factor receives per slice.
enum class TargetFunction { triangle, sinus, constant0, slide, half_circle, hat, canyon };

/// i: swap the values of two context words; ii: a background word becomes a
/// context word; iii: a context word falls back to background.
enum class ChangeCase { exchange, appear, disappear };

TargetFunction parse_target_function(std::string_view name);
std::string_view to_string(TargetFunction fn);
ChangeCase parse_change_case(std::string_view name);  // "i", "ii", "iii"
std::string_view to_string(ChangeCase c);

struct SynthSpec {
  std::uint32_t n_slices = 100;
  std::uint32_t vocab_size = 1000;
  double mean_docs_per_slice = 500;
  double mean_tokens_per_doc = 300;
  std::uint32_t n_stopwords = 50;
  std::uint32_t n_context_words_per_factor = 150;
  double context_mean = 75;
  double context_sd = 25;
  double reference_value = 200;
  double background_value = 0.1;
  double zipf_numerator = 1000;
  bool zipf_enabled = true;
  std::vector<ChangeCase> case_mix{ChangeCase::exchange, ChangeCase::appear, ChangeCase::disappear};
  std::uint32_t peak_changes_per_slice = 50;
  std::uint64_t seed = 1;
  std::array<TargetFunction, kFactorCount> target_functions{
      TargetFunction::triangle, TargetFunction::sinus, TargetFunction::constant0, TargetFunction::slide,
      TargetFunction::half_circle, TargetFunction::hat, TargetFunction::canyon};
  /// Relative probability of drawing each factor for a document.
  std::array<double, kFactorCount> factor_weights{1, 1, 1, 1, 1, 1, 1};

  /// Throws ConfigError on non-positive sizes, an empty case mix or a
  /// vocabulary too small for stopwords, references and contexts.
  void validate() const;
  /// 0-based word index of factor j's reference word.
  std::uint32_t reference_word(std::size_t factor) const {
    return n_stopwords + static_cast<std::uint32_t>(factor);
  }
};

/// Dataset presets: 'A' all change cases with Zipf noise, 'B' exchanges only
/// with Zipf noise, 'C' appear/disappear without Zipf noise. Other fields are
/// taken from `base`.
SynthSpec preset(char dataset, SynthSpec base = {});

/// Makes factor `factor` (0-based) `multiplier` times as likely to be drawn
/// for a document as each other factor.
SynthSpec boost_factor(SynthSpec spec, std::size_t factor, std::uint32_t multiplier);

using Rng = std::mt19937_64;

/// Independent generator for a (seed, tags...) stream, e.g. one per
/// (factor, slice) or (slice, document).
Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

struct FactorState {
  std::size_t index = 0;
  TargetFunction target = TargetFunction::constant0;
  std::uint32_t reference_word = 0;  // 0-based word index
  std::vector<double> values;        // one per vocabulary word
};

struct FactorModel {
  std::vector<double> zipf;
  std::vector<FactorState> factors;
};

/// zipf[i] = zipf_numerator / (i+1) except the reference words (0). Each
/// factor gets n_context_words random non-stopword, non-reference words with
/// Normal(context_mean, context_sd) values, its reference word at
/// reference_value, background_value elsewhere, and 0 for stopwords and other
/// factors' reference words.
FactorModel init_factors(const SynthSpec& spec, Rng& rng);

/// Number of change operations for slice t (1-based) out of n_slices.
std::uint32_t target_change_count(TargetFunction fn, std::uint32_t t, std::uint32_t n_slices, std::uint32_t peak);

struct ChangeResult {
  FactorState state;
  std::uint32_t applied = 0;
  std::uint32_t skipped = 0;  // operations that found no candidate word
};

/// Performs k change operations cycling through `cases` in i, ii, iii order.
/// If both ii and iii are enabled and the cycle stops right after a ii, one
/// extra iii is applied so the number of context words stays constant.
ChangeResult apply_changes(FactorState factor, std::uint32_t k, std::span<const ChangeCase> cases,
                           const SynthSpec& spec, Rng& rng);

/// Normalised multinomial over the vocabulary for documents of one factor.
/// An empty `zipf` means no Zipf noise. Throws std::invalid_argument if all
/// weights are zero.
std::vector<double> document_distribution(std::span<const double> zipf, const FactorState& factor);

/// n_tokens independent draws (0-based word indices).
std::vector<std::uint32_t> sample_document(std::span<const double> zipf, const FactorState& factor,
                                           std::uint32_t n_tokens, Rng& rng);

struct FactorTrace {
  std::size_t factor = 0;
  TargetFunction target = TargetFunction::constant0;
  std::string reference_term;
  std::vector<std::uint32_t> change_counts;  // per slice
  std::vector<double> normalized;            // change_counts / max (all 0 if max is 0)
};

struct SyntheticDataset {
  SynthSpec spec;
  SlicedCorpus corpus;
  std::vector<TermId> reference_terms;  // ids in corpus.vocab, one per factor
  std::vector<FactorTrace> traces;
  std::array<std::uint64_t, kFactorCount> documents_per_factor{};
  std::uint64_t skipped_changes = 0;
};

/// Zero-padded synthetic term name for a 0-based word index, e.g. "w0051".
std::string synthetic_term(std::uint32_t index, std::uint32_t vocab_size);

/// Date of slice t (0-based) in exported corpora: 2000-01-01 + t days.
Date synthetic_date(std::size_t slice);

/// Generates the corpus slice by slice: every factor is evolved by its
/// target function's change count, then Poisson(mean_docs) documents are
/// sampled, each from one weighted-random factor, each as a single sentence.
/// The result depends only on the spec (including its seed), never on
/// `threads`.
SyntheticDataset generate_dataset(const SynthSpec& spec, unsigned threads = 0);

/// Documents as JSONL-ready records (space-separated terms ending in '.').
std::vector<RawDocument> to_raw_documents(const SyntheticDataset& dataset);
/// The stopword list of the synthetic vocabulary, one term per line.
void write_stopwords(std::ostream& out, const SynthSpec& spec);
/// CSV `factor,target_function,slice,normalized_change` (factor 1-based,
/// slice 0-based to match corpus slice indices).
void write_ground_truth_csv(std::ostream& out, const SyntheticDataset& dataset);

}  // namespace volatext
