#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "volatext/cooccurrence.hpp"

namespace volatext {

enum class Estimator { baseline, global_baseline, sig, global_sig, minmax };

inline constexpr Estimator kAllEstimators[] = {Estimator::baseline, Estimator::global_baseline,
                                               Estimator::sig, Estimator::global_sig,
                                               Estimator::minmax};

Estimator parse_estimator(std::string_view name);
std::string_view to_string(Estimator estimator);
bool uses_global_statistic(Estimator estimator);

struct RankEntry {
  TermId term;
  std::uint32_t rank;  // 1 = most significant
  double significance;
};

/// The co-occurrences of one focus word in one slice, ranked by descending
/// significance with ties broken by ascending term id. Ranks are dense
/// 1..n_cooc.
class RankView {
 public:
  RankView() = default;
  RankView(TermId focus, std::size_t slice_index, std::span<const SymmetricMatrix<double>::Entry> row);

  TermId focus() const { return focus_; }
  std::size_t slice_index() const { return slice_index_; }
  std::uint32_t n_cooc() const { return static_cast<std::uint32_t>(by_rank_.size()); }
  bool empty() const { return by_rank_.empty(); }

  /// Entries in rank order.
  std::span<const RankEntry> entries() const { return by_rank_; }
  /// Entries in ascending term order.
  std::span<const RankEntry> by_term() const { return by_term_; }
  const RankEntry* find(TermId term) const;

 private:
  TermId focus_ = 0;
  std::size_t slice_index_ = 0;
  std::vector<RankEntry> by_rank_;
  std::vector<RankEntry> by_term_;
};

RankView rank_slice(const SigSlice& slice, TermId focus);

/// Coefficient of variation (population sigma / mean) of the observed ranks.
/// Gaps (nullopt) are skipped. Throws std::invalid_argument if nothing is
/// observed.
double cv_baseline(std::span<const std::optional<double>> ranks);

/// Population standard deviation of the observed significances; gaps skipped.
double cv_sig(std::span<const std::optional<double>> significances);

/// Rank normalised against the largest co-occurrence count in the history:
/// (max_h + 1 - raw_rank) / max_h. Throws std::out_of_range unless
/// 1 <= raw_rank <= max_h.
double minmax_rank_nonzero(std::uint32_t raw_rank, std::uint32_t max_h);

/// Rank normalised against the slice's own co-occurrence count:
/// (n_cooc_t + 1 - raw_rank) / max_h, and exactly 0 for a gap.
double minmax_rank_zero(std::optional<std::uint32_t> raw_rank, std::uint32_t n_cooc_t, std::uint32_t max_h);

struct MinMaxObservation {
  std::optional<std::uint32_t> rank;  // nullopt = gap
  std::uint32_t n_cooc = 0;           // co-occurrences of the focus word in that slice
};

/// Sum over consecutive slice pairs of the MinMax rank distance of one
/// co-occurrence. Transitions where both slices observe the pair compare
/// minmax_rank_nonzero values; transitions touching a gap compare
/// minmax_rank_zero values. Not yet divided by the (pairs * (h-1)) factor.
double cv_minmax(std::span<const MinMaxObservation> sequence, std::uint32_t max_h);

/// Volatility of one word. values[t] covers the window of h slices ending at
/// slice t; it is missing for t < h-1 and for windows where the word has no
/// co-occurrence.
struct VolatilitySeries {
  TermId focus = 0;
  Estimator estimator = Estimator::minmax;
  std::uint32_t h = 2;
  std::vector<std::optional<double>> values;
};

/// Per-slice significance matrices plus, when global estimators are needed,
/// the pooled statistic used to fill gaps. Immutable; safe to share across
/// threads.
class CorpusStatistics {
 public:
  CorpusStatistics(std::vector<SigSlice> slices, std::optional<GlobalSig> global);

  /// Counts, scores and (optionally) pools a corpus. When `options.focus` is
  /// set only rows of those words are materialised.
  static CorpusStatistics compute(const SlicedCorpus& corpus, Measure measure, const CoocOptions& options,
                                  bool with_global, unsigned threads = 0);

  Measure measure() const { return measure_; }
  std::size_t slice_count() const { return slices_.size(); }
  const SigSlice& slice(std::size_t t) const { return slices_.at(t); }
  const GlobalSig* global() const { return global_ ? &*global_ : nullptr; }

 private:
  Measure measure_ = Measure::dice;
  std::vector<SigSlice> slices_;
  std::optional<GlobalSig> global_;
};

/// Slides a window of h slices over the corpus and scores one word.
/// Throws ConfigError when h < 2 or h exceeds the slice count, and
/// std::invalid_argument when a global estimator is requested without a
/// global statistic.
VolatilitySeries volatility_series(const CorpusStatistics& stats, TermId word, Estimator estimator,
                                   std::uint32_t h);

/// Several estimators for one word, sharing the per-slice rank views.
std::vector<VolatilitySeries> volatility_series(const CorpusStatistics& stats, TermId word,
                                                std::span<const Estimator> estimators, std::uint32_t h);

/// Several words in parallel. Output order follows `words` then `estimators`
/// and does not depend on `threads`.
std::vector<VolatilitySeries> volatility_series(const CorpusStatistics& stats, std::span<const TermId> words,
                                                std::span<const Estimator> estimators, std::uint32_t h,
                                                unsigned threads);

/// CSV `term,estimator,h,slice_label,value`, ordered by term, estimator and
/// slice; missing values are empty fields.
void write_series_csv(std::ostream& out, std::span<const VolatilitySeries> series, const SlicedCorpus& corpus);

/// CSV `term,slice_label,frequency` for the same words.
void write_frequency_csv(std::ostream& out, std::span<const TermId> words, const SlicedCorpus& corpus);

}  // namespace volatext
