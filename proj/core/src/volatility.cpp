#include "volatext/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "volatext/format.hpp"
#include "volatext/parallel.hpp"

namespace volatext {

Estimator parse_estimator(std::string_view name) {
  if (name == "baseline") return Estimator::baseline;
  if (name == "global_baseline") return Estimator::global_baseline;
  if (name == "sig") return Estimator::sig;
  if (name == "global_sig") return Estimator::global_sig;
  if (name == "minmax") return Estimator::minmax;
  throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

std::string_view to_string(Estimator estimator) {
  switch (estimator) {
    case Estimator::baseline: return "baseline";
    case Estimator::global_baseline: return "global_baseline";
    case Estimator::sig: return "sig";
    case Estimator::global_sig: return "global_sig";
    case Estimator::minmax: return "minmax";
  }
  return "?";
}

bool uses_global_statistic(Estimator estimator) {
  return estimator == Estimator::global_baseline || estimator == Estimator::global_sig;
}

RankView::RankView(TermId focus, std::size_t slice_index, std::span<const SymmetricMatrix<double>::Entry> row)
    : focus_(focus), slice_index_(slice_index) {
  by_rank_.reserve(row.size());
  for (const auto& e : row) by_rank_.push_back({e.neighbor, 0, e.value});
  std::sort(by_rank_.begin(), by_rank_.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.significance != b.significance) return a.significance > b.significance;
    return a.term < b.term;
  });
  for (std::size_t i = 0; i < by_rank_.size(); ++i) by_rank_[i].rank = static_cast<std::uint32_t>(i + 1);
  by_term_ = by_rank_;
  std::sort(by_term_.begin(), by_term_.end(),
            [](const RankEntry& a, const RankEntry& b) { return a.term < b.term; });
}

const RankEntry* RankView::find(TermId term) const {
  auto it = std::lower_bound(by_term_.begin(), by_term_.end(), term,
                             [](const RankEntry& e, TermId t) { return e.term < t; });
  return (it != by_term_.end() && it->term == term) ? &*it : nullptr;
}

RankView rank_slice(const SigSlice& slice, TermId focus) {
  return RankView(focus, slice.slice_index, slice.sig.row(focus));
}

namespace {

struct Moments {
  double mean = 0;
  double sd = 0;
};

Moments population_moments(std::span<const std::optional<double>> values) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& v : values)
    if (v) {
      sum += *v;
      ++n;
    }
  if (n == 0) throw std::invalid_argument("no observable values in sequence");
  const auto first = std::find_if(values.begin(), values.end(), [](const auto& v) { return v.has_value(); });
  if (std::all_of(first, values.end(), [&](const auto& v) { return !v || *v == **first; }))
    return {**first, 0.0};
  const double mean = sum / static_cast<double>(n);
  double ss = 0;
  for (const auto& v : values)
    if (v) ss += (*v - mean) * (*v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(n))};
}

}  // namespace

double cv_baseline(std::span<const std::optional<double>> ranks) {
  const auto m = population_moments(ranks);
  return m.sd / m.mean;
}

double cv_sig(std::span<const std::optional<double>> significances) {
  return population_moments(significances).sd;
}

double minmax_rank_nonzero(std::uint32_t raw_rank, std::uint32_t max_h) {
  if (raw_rank < 1 || raw_rank > max_h)
    throw std::out_of_range("rank " + std::to_string(raw_rank) + " outside 1.." + std::to_string(max_h));
  return static_cast<double>(max_h + 1 - raw_rank) / static_cast<double>(max_h);
}

double minmax_rank_zero(std::optional<std::uint32_t> raw_rank, std::uint32_t n_cooc_t, std::uint32_t max_h) {
  if (!raw_rank) return 0.0;
  if (*raw_rank < 1 || *raw_rank > n_cooc_t || n_cooc_t > max_h)
    throw std::out_of_range("rank " + std::to_string(*raw_rank) + " with " + std::to_string(n_cooc_t) +
                            " co-occurrences exceeds history maximum " + std::to_string(max_h));
  return static_cast<double>(n_cooc_t + 1 - *raw_rank) / static_cast<double>(max_h);
}

double cv_minmax(std::span<const MinMaxObservation> sequence, std::uint32_t max_h) {
  if (sequence.size() < 2) throw std::invalid_argument("cv_minmax needs at least two slices");
  if (std::none_of(sequence.begin(), sequence.end(), [](const auto& o) { return o.rank.has_value(); }))
    throw std::invalid_argument("cv_minmax: pair never observed in the history");
  double total = 0;
  for (std::size_t t = 0; t + 1 < sequence.size(); ++t) {
    const auto& a = sequence[t];
    const auto& b = sequence[t + 1];
    if (a.rank && b.rank) {
      total += std::abs(minmax_rank_nonzero(*a.rank, max_h) - minmax_rank_nonzero(*b.rank, max_h));
    } else {
      total += std::abs(minmax_rank_zero(a.rank, a.n_cooc, max_h) - minmax_rank_zero(b.rank, b.n_cooc, max_h));
    }
  }
  return total;
}

CorpusStatistics::CorpusStatistics(std::vector<SigSlice> slices, std::optional<GlobalSig> global)
    : slices_(std::move(slices)), global_(std::move(global)) {
  if (!slices_.empty()) measure_ = slices_.front().measure;
  for (const auto& s : slices_)
    if (s.measure != measure_) throw std::invalid_argument("CorpusStatistics: mixed measures");
  if (global_ && !slices_.empty() && global_->measure != measure_)
    throw std::invalid_argument("CorpusStatistics: global measure differs from slices");
}

CorpusStatistics CorpusStatistics::compute(const SlicedCorpus& corpus, Measure measure,
                                           const CoocOptions& options, bool with_global, unsigned threads) {
  auto counts = count_all_slices(corpus, options, threads);
  std::vector<SigSlice> sig(counts.size());
  parallel_for(counts.size(), threads, [&](std::size_t i) { sig[i] = significance(counts[i], measure); });
  std::optional<GlobalSig> global;
  if (with_global) global = global_significance(counts, measure);
  return CorpusStatistics(std::move(sig), std::move(global));
}

namespace {

void check_history(const CorpusStatistics& stats, std::uint32_t h) {
  if (h < 2) throw ConfigError("history h must be >= 2");
  if (h > stats.slice_count())
    throw ConfigError("history h=" + std::to_string(h) + " exceeds slice count " +
                      std::to_string(stats.slice_count()));
}

// Terms that co-occur with the focus word in at least one slice of the window.
std::vector<TermId> window_terms(std::span<const RankView> views) {
  std::vector<TermId> terms;
  for (const auto& v : views)
    for (const auto& e : v.by_term()) terms.push_back(e.term);
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return terms;
}

std::optional<double> window_value(Estimator estimator, std::span<const RankView> local,
                                   std::span<const RankView> filled) {
  const auto terms = window_terms(local);
  if (terms.empty()) return std::nullopt;
  const std::size_t h = local.size();

  if (estimator == Estimator::minmax) {
    std::uint32_t max_h = 0;
    for (const auto& v : local) max_h = std::max(max_h, v.n_cooc());
    std::vector<MinMaxObservation> seq(h);
    double total = 0;
    for (auto term : terms) {
      for (std::size_t s = 0; s < h; ++s) {
        const auto* e = local[s].find(term);
        seq[s] = {e ? std::optional<std::uint32_t>(e->rank) : std::nullopt, local[s].n_cooc()};
      }
      total += cv_minmax(seq, max_h);
    }
    return total / (static_cast<double>(terms.size()) * static_cast<double>(h - 1));
  }

  const bool global = uses_global_statistic(estimator);
  const bool by_rank = estimator == Estimator::baseline || estimator == Estimator::global_baseline;
  const auto views = global ? filled : local;
  std::vector<std::optional<double>> seq(h);
  double total = 0;
  for (auto term : terms) {
    for (std::size_t s = 0; s < h; ++s) {
      const auto* e = views[s].find(term);
      if (!e)
        seq[s] = std::nullopt;
      else
        seq[s] = by_rank ? static_cast<double>(e->rank) : e->significance;
    }
    total += by_rank ? cv_baseline(seq) : cv_sig(seq);
  }
  return total / static_cast<double>(terms.size());
}

}  // namespace

std::vector<VolatilitySeries> volatility_series(const CorpusStatistics& stats, TermId word,
                                                std::span<const Estimator> estimators, std::uint32_t h) {
  check_history(stats, h);
  const bool need_global = std::any_of(estimators.begin(), estimators.end(), uses_global_statistic);
  if (need_global && !stats.global())
    throw std::invalid_argument("global estimator requested but no global statistic was computed");

  const std::size_t n = stats.slice_count();
  std::vector<RankView> local(n);
  std::vector<RankView> filled(need_global ? n : 0);
  for (std::size_t t = 0; t < n; ++t) {
    local[t] = rank_slice(stats.slice(t), word);
    if (need_global) {
      const auto row = fill_row(stats.slice(t).sig.row(word), stats.global()->sig.row(word));
      filled[t] = RankView(word, t, row);
    }
  }

  std::vector<VolatilitySeries> out;
  out.reserve(estimators.size());
  for (auto estimator : estimators) {
    VolatilitySeries series{word, estimator, h, std::vector<std::optional<double>>(n)};
    for (std::size_t end = h - 1; end < n; ++end) {
      const std::size_t begin = end + 1 - h;
      const std::span<const RankView> lw(local.data() + begin, h);
      const std::span<const RankView> fw = need_global ? std::span<const RankView>(filled.data() + begin, h)
                                                       : std::span<const RankView>{};
      series.values[end] = window_value(estimator, lw, fw);
    }
    out.push_back(std::move(series));
  }
  return out;
}

VolatilitySeries volatility_series(const CorpusStatistics& stats, TermId word, Estimator estimator,
                                   std::uint32_t h) {
  const Estimator one[] = {estimator};
  return std::move(volatility_series(stats, word, one, h).front());
}

std::vector<VolatilitySeries> volatility_series(const CorpusStatistics& stats, std::span<const TermId> words,
                                                std::span<const Estimator> estimators, std::uint32_t h,
                                                unsigned threads) {
  check_history(stats, h);
  std::vector<std::vector<VolatilitySeries>> per_word(words.size());
  parallel_for(words.size(), threads,
               [&](std::size_t i) { per_word[i] = volatility_series(stats, words[i], estimators, h); });
  std::vector<VolatilitySeries> out;
  out.reserve(words.size() * estimators.size());
  for (auto& v : per_word)
    for (auto& s : v) out.push_back(std::move(s));
  return out;
}

void write_series_csv(std::ostream& out, std::span<const VolatilitySeries> series, const SlicedCorpus& corpus) {
  std::vector<const VolatilitySeries*> order;
  order.reserve(series.size());
  for (const auto& s : series) order.push_back(&s);
  // Term ids are lexicographic, so id order is term order.
  std::stable_sort(order.begin(), order.end(), [](const VolatilitySeries* a, const VolatilitySeries* b) {
    return std::pair(a->focus, static_cast<int>(a->estimator)) < std::pair(b->focus, static_cast<int>(b->estimator));
  });
  out << "term,estimator,h,slice_label,value\n";
  for (const auto* s : order) {
    const auto& term = corpus.vocab.term(s->focus);
    for (std::size_t t = 0; t < s->values.size(); ++t)
      out << term << ',' << to_string(s->estimator) << ',' << s->h << ',' << corpus.slices.at(t).label << ','
          << format_optional(s->values[t]) << '\n';
  }
}

void write_frequency_csv(std::ostream& out, std::span<const TermId> words, const SlicedCorpus& corpus) {
  std::vector<TermId> sorted(words.begin(), words.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  constexpr auto kUnused = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> column(corpus.vocab.size(), kUnused);
  for (std::size_t i = 0; i < sorted.size(); ++i) column.at(sorted[i]) = i;

  const std::size_t n_slices = corpus.slices.size();
  std::vector<std::uint64_t> freq(sorted.size() * n_slices, 0);
  for (std::size_t t = 0; t < n_slices; ++t)
    for (const auto& doc : corpus.slices[t].documents)
      for (const auto& sentence : doc)
        for (auto id : sentence)
          if (column[id] != kUnused) ++freq[column[id] * n_slices + t];

  out << "term,slice_label,frequency\n";
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t t = 0; t < n_slices; ++t)
      out << corpus.vocab.term(sorted[i]) << ',' << corpus.slices[t].label << ',' << freq[i * n_slices + t] << '\n';
}

}  // namespace volatext
