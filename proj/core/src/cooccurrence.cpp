#include "volatext/cooccurrence.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "volatext/format.hpp"
#include "volatext/parallel.hpp"

namespace volatext {
namespace {

std::uint64_t pair_key(TermId a, TermId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

double xlogx_ratio(double k, double expected) { return k > 0 ? k * std::log(k / expected) : 0.0; }

template <typename T>
void write_tsv_impl(std::ostream& out, const SymmetricMatrix<T>& m, const Vocabulary& vocab) {
  m.for_each_pair([&](TermId a, TermId b, T value) {
    out << vocab.term(a) << '\t' << vocab.term(b) << '\t';
    if constexpr (std::is_floating_point_v<T>)
      out << format_double(value);
    else
      out << value;
    out << '\n';
  });
}

}  // namespace

Measure parse_measure(std::string_view name) {
  if (name == "dice") return Measure::dice;
  if (name == "llr") return Measure::llr;
  if (name == "mi") return Measure::mi;
  throw ConfigError("unknown measure '" + std::string(name) + "'");
}

std::string_view to_string(Measure measure) {
  switch (measure) {
    case Measure::dice: return "dice";
    case Measure::llr: return "llr";
    case Measure::mi: return "mi";
  }
  return "?";
}

CoocSlice count_cooccurrences(const TimeSlice& slice, const Vocabulary& vocab,
                              const CoocOptions& options) {
  const std::size_t v = vocab.size();
  CoocSlice out;
  out.slice_index = slice.index;
  out.marginals.assign(v, 0);

  std::vector<std::uint8_t> is_focus;
  if (!options.focus.empty()) {
    is_focus.assign(v, 0);
    for (auto f : options.focus)
      if (f < v) is_focus[f] = 1;
  }

  std::unordered_map<std::uint64_t, std::uint32_t> counts;
  std::vector<TermId> terms;
  for (const auto& doc : slice.documents) {
    for (const auto& sentence : doc) {
      ++out.n_sentences;
      terms.clear();
      for (auto t : sentence)
        if (!(options.skip_stopwords && vocab.is_stopword(t))) terms.push_back(t);
      std::sort(terms.begin(), terms.end());
      terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
      for (auto t : terms) ++out.marginals[t];

      if (is_focus.empty()) {
        for (std::size_t i = 0; i < terms.size(); ++i)
          for (std::size_t j = i + 1; j < terms.size(); ++j) ++counts[pair_key(terms[i], terms[j])];
      } else {
        for (auto f : terms) {
          if (!is_focus[f]) continue;
          for (auto x : terms) {
            if (x == f || (is_focus[x] && x < f)) continue;
            ++counts[pair_key(f, x)];
          }
        }
      }
    }
  }

  std::vector<SymmetricMatrix<std::uint32_t>::Triple> pairs;
  pairs.reserve(counts.size());
  for (const auto& [key, n] : counts)
    if (n >= options.min_cooc_count)
      pairs.push_back({static_cast<TermId>(key >> 32), static_cast<TermId>(key & 0xffffffffu), n});
  out.counts = SymmetricMatrix<std::uint32_t>::from_pairs(v, pairs);
  return out;
}

std::vector<CoocSlice> count_all_slices(const SlicedCorpus& corpus, const CoocOptions& options,
                                        unsigned threads) {
  std::vector<CoocSlice> out(corpus.slices.size());
  parallel_for(out.size(), threads, [&](std::size_t i) {
    out[i] = count_cooccurrences(corpus.slices[i], corpus.vocab, options);
  });
  return out;
}

CoocSlice pool_counts(std::span<const CoocSlice> slices) {
  CoocSlice pooled;
  if (slices.empty()) return pooled;
  const std::size_t v = slices.front().marginals.size();
  pooled.marginals.assign(v, 0);
  std::unordered_map<std::uint64_t, std::uint32_t> counts;
  for (const auto& s : slices) {
    if (s.marginals.size() != v) throw std::invalid_argument("pool_counts: vocabulary size mismatch");
    pooled.n_sentences += s.n_sentences;
    for (std::size_t t = 0; t < v; ++t) pooled.marginals[t] += s.marginals[t];
    s.counts.for_each_pair([&](TermId a, TermId b, std::uint32_t n) { counts[pair_key(a, b)] += n; });
  }
  std::vector<SymmetricMatrix<std::uint32_t>::Triple> pairs;
  pairs.reserve(counts.size());
  for (const auto& [key, n] : counts)
    pairs.push_back({static_cast<TermId>(key >> 32), static_cast<TermId>(key & 0xffffffffu), n});
  pooled.counts = SymmetricMatrix<std::uint32_t>::from_pairs(v, pairs);
  return pooled;
}

double dice_coefficient(double n_ab, double n_a, double n_b) { return 2.0 * n_ab / (n_a + n_b); }

double log_likelihood_ratio(double n_ab, double n_a, double n_b, double n) {
  const double k11 = n_ab;
  const double k12 = n_a - n_ab;
  const double k21 = n_b - n_ab;
  const double k22 = n - n_a - n_b + n_ab;
  const double g2 = 2.0 * (xlogx_ratio(k11, n_a * n_b / n) + xlogx_ratio(k12, n_a * (n - n_b) / n) +
                           xlogx_ratio(k21, (n - n_a) * n_b / n) +
                           xlogx_ratio(k22, (n - n_a) * (n - n_b) / n));
  return std::max(0.0, g2);
}

double pointwise_mutual_information(double n_ab, double n_a, double n_b, double n) {
  return std::log2((n_ab * n) / (n_a * n_b));
}

std::optional<double> association(Measure measure, std::uint64_t n_ab, std::uint64_t n_a,
                                  std::uint64_t n_b, std::uint64_t n) {
  const auto ab = static_cast<double>(n_ab);
  const auto a = static_cast<double>(n_a);
  const auto b = static_cast<double>(n_b);
  const auto total = static_cast<double>(n);
  switch (measure) {
    case Measure::dice:
      return dice_coefficient(ab, a, b);
    case Measure::llr:
      return log_likelihood_ratio(ab, a, b, total);
    case Measure::mi: {
      // Exact integer test for independence so that n_ab*N == n_a*n_b is
      // always dropped regardless of rounding in log2.
      if (n_ab * n <= n_a * n_b) return std::nullopt;
      return pointwise_mutual_information(ab, a, b, total);
    }
  }
  return std::nullopt;
}

SigSlice significance(const CoocSlice& counts, Measure measure) {
  SigSlice out;
  out.slice_index = counts.slice_index;
  out.measure = measure;
  std::vector<SymmetricMatrix<double>::Triple> pairs;
  if (counts.n_sentences > 0) {
    pairs.reserve(counts.counts.pair_count());
    counts.counts.for_each_pair([&](TermId a, TermId b, std::uint32_t n_ab) {
      if (auto value = association(measure, n_ab, counts.marginals[a], counts.marginals[b], counts.n_sentences))
        pairs.push_back({a, b, *value});
    });
  }
  out.sig = SymmetricMatrix<double>::from_pairs(counts.marginals.size(), pairs);
  return out;
}

GlobalSig global_significance(std::span<const CoocSlice> slices, Measure measure) {
  const auto pooled = pool_counts(slices);
  return {measure, significance(pooled, measure).sig};
}

GlobalSig global_significance(const SlicedCorpus& corpus, Measure measure, const CoocOptions& options,
                              unsigned threads) {
  if (corpus.slices.empty()) throw DataError("global significance needs a non-empty corpus");
  const auto slices = count_all_slices(corpus, options, threads);
  return global_significance(slices, measure);
}

std::vector<SymmetricMatrix<double>::Entry> fill_row(std::span<const SymmetricMatrix<double>::Entry> local,
                                                     std::span<const SymmetricMatrix<double>::Entry> global) {
  std::vector<SymmetricMatrix<double>::Entry> out;
  out.reserve(std::max(local.size(), global.size()));
  auto l = local.begin();
  auto g = global.begin();
  while (l != local.end() || g != global.end()) {
    if (g == global.end() || (l != local.end() && l->neighbor < g->neighbor)) {
      out.push_back(*l++);
    } else if (l == local.end() || g->neighbor < l->neighbor) {
      out.push_back(*g++);
    } else {
      out.push_back(*l++);
      ++g;
    }
  }
  return out;
}

SigSlice fill_gaps(const SigSlice& slice, const GlobalSig& global) {
  if (slice.measure != global.measure)
    throw std::invalid_argument("fill_gaps: slice measure '" + std::string(to_string(slice.measure)) +
                                "' differs from global measure '" + std::string(to_string(global.measure)) + "'");
  const std::size_t v = std::max(slice.sig.n_terms(), global.sig.n_terms());
  std::vector<std::vector<SymmetricMatrix<double>::Entry>> rows(v);
  for (TermId a = 0; a < v; ++a) rows[a] = fill_row(slice.sig.row(a), global.sig.row(a));
  return {slice.slice_index, slice.measure, SymmetricMatrix<double>::from_rows(std::move(rows))};
}

void write_pair_tsv(std::ostream& out, const SymmetricMatrix<std::uint32_t>& m, const Vocabulary& vocab) {
  write_tsv_impl(out, m, vocab);
}

void write_pair_tsv(std::ostream& out, const SymmetricMatrix<double>& m, const Vocabulary& vocab) {
  write_tsv_impl(out, m, vocab);
}

}  // namespace volatext
