#include "volatext/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "volatext/format.hpp"
#include "volatext/parallel.hpp"

namespace volatext {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double draw_context_value(const SynthSpec& spec, Rng& rng) {
  std::normal_distribution<double> normal(spec.context_mean, spec.context_sd);
  // Truncated at the background level so a context word is always
  // distinguishable from background by value.
  for (;;) {
    const double v = normal(rng);
    if (v > spec.background_value) return v;
  }
}

template <typename T>
T take_random(std::vector<T>& pool, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const std::size_t i = pick(rng);
  T value = pool[i];
  pool[i] = pool.back();
  pool.pop_back();
  return value;
}

}  // namespace

TargetFunction parse_target_function(std::string_view name) {
  for (auto fn : {TargetFunction::triangle, TargetFunction::sinus, TargetFunction::constant0, TargetFunction::slide,
                  TargetFunction::half_circle, TargetFunction::hat, TargetFunction::canyon})
    if (to_string(fn) == name) return fn;
  throw ConfigError("unknown target function '" + std::string(name) + "'");
}

std::string_view to_string(TargetFunction fn) {
  switch (fn) {
    case TargetFunction::triangle: return "triangle";
    case TargetFunction::sinus: return "sinus";
    case TargetFunction::constant0: return "constant0";
    case TargetFunction::slide: return "slide";
    case TargetFunction::half_circle: return "half_circle";
    case TargetFunction::hat: return "hat";
    case TargetFunction::canyon: return "canyon";
  }
  return "?";
}

ChangeCase parse_change_case(std::string_view name) {
  if (name == "i") return ChangeCase::exchange;
  if (name == "ii") return ChangeCase::appear;
  if (name == "iii") return ChangeCase::disappear;
  throw ConfigError("unknown change case '" + std::string(name) + "' (expected i, ii or iii)");
}

std::string_view to_string(ChangeCase c) {
  switch (c) {
    case ChangeCase::exchange: return "i";
    case ChangeCase::appear: return "ii";
    case ChangeCase::disappear: return "iii";
  }
  return "?";
}

void SynthSpec::validate() const {
  if (n_slices == 0 || vocab_size == 0 || n_context_words_per_factor == 0)
    throw ConfigError("synthetic spec sizes must be positive");
  if (!(mean_docs_per_slice > 0) || !(mean_tokens_per_doc > 0))
    throw ConfigError("synthetic spec means must be positive");
  if (case_mix.empty()) throw ConfigError("case_mix must not be empty");
  if (static_cast<std::uint64_t>(n_stopwords) + kFactorCount + n_context_words_per_factor > vocab_size)
    throw ConfigError("vocabulary too small for stopwords, reference words and contexts");
  if (!(background_value > 0) || !(reference_value > 0) || !(context_sd >= 0))
    throw ConfigError("synthetic spec values must be positive");
  for (double w : factor_weights)
    if (!(w >= 0)) throw ConfigError("factor weights must be non-negative");
  if (std::accumulate(factor_weights.begin(), factor_weights.end(), 0.0) <= 0)
    throw ConfigError("at least one factor weight must be positive");
}

SynthSpec preset(char dataset, SynthSpec base) {
  switch (dataset) {
    case 'A':
    case 'a':
      base.case_mix = {ChangeCase::exchange, ChangeCase::appear, ChangeCase::disappear};
      base.zipf_enabled = true;
      return base;
    case 'B':
    case 'b':
      base.case_mix = {ChangeCase::exchange};
      base.zipf_enabled = true;
      return base;
    case 'C':
    case 'c':
      base.case_mix = {ChangeCase::appear, ChangeCase::disappear};
      base.zipf_enabled = false;
      return base;
    default:
      throw ConfigError(std::string("unknown dataset preset '") + dataset + "'");
  }
}

SynthSpec boost_factor(SynthSpec spec, std::size_t factor, std::uint32_t multiplier) {
  if (factor >= kFactorCount) throw ConfigError("factor index out of range");
  if (multiplier < 1) throw ConfigError("boost multiplier must be >= 1");
  spec.factor_weights.fill(1.0);
  spec.factor_weights[factor] = multiplier;
  return spec;
}

Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(seed);
  for (auto tag : tags) h = splitmix64(h ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
  return Rng(h);
}

FactorModel init_factors(const SynthSpec& spec, Rng& rng) {
  spec.validate();
  const std::uint32_t v = spec.vocab_size;
  FactorModel model;
  model.zipf.resize(v);
  for (std::uint32_t i = 0; i < v; ++i) model.zipf[i] = spec.zipf_numerator / static_cast<double>(i + 1);
  for (std::size_t j = 0; j < kFactorCount; ++j) model.zipf[spec.reference_word(j)] = 0.0;

  const std::uint32_t first_candidate = spec.n_stopwords + static_cast<std::uint32_t>(kFactorCount);
  for (std::size_t j = 0; j < kFactorCount; ++j) {
    FactorState f;
    f.index = j;
    f.target = spec.target_functions[j];
    f.reference_word = spec.reference_word(j);
    f.values.assign(v, 0.0);
    for (std::uint32_t i = first_candidate; i < v; ++i) f.values[i] = spec.background_value;
    f.values[f.reference_word] = spec.reference_value;

    std::vector<std::uint32_t> candidates(v - first_candidate);
    std::iota(candidates.begin(), candidates.end(), first_candidate);
    for (std::uint32_t c = 0; c < spec.n_context_words_per_factor; ++c) {
      std::uniform_int_distribution<std::size_t> pick(c, candidates.size() - 1);
      std::swap(candidates[c], candidates[pick(rng)]);
      f.values[candidates[c]] = draw_context_value(spec, rng);
    }
    model.factors.push_back(std::move(f));
  }
  return model;
}

std::uint32_t target_change_count(TargetFunction fn, std::uint32_t t, std::uint32_t n_slices, std::uint32_t peak) {
  if (t < 1 || t > n_slices) throw std::out_of_range("slice index outside 1..n_slices");
  const double n = n_slices;
  const double x = t;
  const double p = peak;
  const bool middle = x >= 0.4 * n && x <= 0.6 * n;
  double value = 0;
  switch (fn) {
    case TargetFunction::triangle:
      value = p * std::min(x, n - x) / (n / 2);
      break;
    case TargetFunction::sinus:
      value = p * (1 + std::sin(2 * std::numbers::pi * x / n)) / 2;
      break;
    case TargetFunction::constant0:
      value = 0;
      break;
    case TargetFunction::slide:
      value = p * x / n;
      break;
    case TargetFunction::half_circle: {
      const double u = 2 * x / n - 1;
      value = p * std::sqrt(std::max(0.0, 1 - u * u));
      break;
    }
    case TargetFunction::hat:
      value = middle ? p : 0;
      break;
    case TargetFunction::canyon:
      value = middle ? 0 : p;
      break;
  }
  return static_cast<std::uint32_t>(std::lround(std::max(0.0, value)));
}

ChangeResult apply_changes(FactorState factor, std::uint32_t k, std::span<const ChangeCase> cases,
                           const SynthSpec& spec, Rng& rng) {
  bool enabled[3] = {false, false, false};
  for (auto c : cases) enabled[static_cast<int>(c)] = true;
  std::vector<ChangeCase> cycle;
  for (auto c : {ChangeCase::exchange, ChangeCase::appear, ChangeCase::disappear})
    if (enabled[static_cast<int>(c)]) cycle.push_back(c);
  if (cycle.empty() && k > 0) throw std::invalid_argument("apply_changes: no change case enabled");

  std::vector<ChangeCase> ops;
  ops.reserve(k + 1);
  for (std::uint32_t q = 0; q < k; ++q) ops.push_back(cycle[q % cycle.size()]);
  if (!ops.empty() && ops.back() == ChangeCase::appear && enabled[static_cast<int>(ChangeCase::disappear)])
    ops.push_back(ChangeCase::disappear);

  const std::uint32_t first_candidate = spec.n_stopwords + static_cast<std::uint32_t>(kFactorCount);
  std::vector<std::uint32_t> context;
  std::vector<std::uint32_t> background;
  for (std::uint32_t i = first_candidate; i < factor.values.size(); ++i) {
    if (factor.values[i] > spec.background_value)
      context.push_back(i);
    else
      background.push_back(i);
  }

  ChangeResult result;
  for (auto op : ops) {
    switch (op) {
      case ChangeCase::exchange: {
        if (context.size() < 2) {
          ++result.skipped;
          continue;
        }
        std::uniform_int_distribution<std::size_t> pick_a(0, context.size() - 1);
        std::uniform_int_distribution<std::size_t> pick_b(0, context.size() - 2);
        const std::size_t a = pick_a(rng);
        std::size_t b = pick_b(rng);
        if (b >= a) ++b;
        std::swap(factor.values[context[a]], factor.values[context[b]]);
        break;
      }
      case ChangeCase::appear: {
        if (background.empty()) {
          ++result.skipped;
          continue;
        }
        const auto w = take_random(background, rng);
        factor.values[w] = draw_context_value(spec, rng);
        context.push_back(w);
        break;
      }
      case ChangeCase::disappear: {
        if (context.empty()) {
          ++result.skipped;
          continue;
        }
        const auto w = take_random(context, rng);
        factor.values[w] = spec.background_value;
        background.push_back(w);
        break;
      }
    }
    ++result.applied;
  }
  result.state = std::move(factor);
  return result;
}

std::vector<double> document_distribution(std::span<const double> zipf, const FactorState& factor) {
  std::vector<double> p(factor.values);
  if (!zipf.empty()) {
    if (zipf.size() != p.size()) throw std::invalid_argument("zipf/factor size mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += zipf[i];
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(total > 0)) throw std::invalid_argument("document distribution has zero mass");
  for (auto& x : p) x /= total;
  return p;
}

std::vector<std::uint32_t> sample_document(std::span<const double> zipf, const FactorState& factor,
                                           std::uint32_t n_tokens, Rng& rng) {
  const auto p = document_distribution(zipf, factor);
  std::discrete_distribution<std::uint32_t> dist(p.begin(), p.end());
  std::vector<std::uint32_t> tokens(n_tokens);
  for (auto& t : tokens) t = dist(rng);
  return tokens;
}

std::string synthetic_term(std::uint32_t index, std::uint32_t vocab_size) {
  int width = 4;
  for (std::uint32_t v = vocab_size; v >= 10000; v /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof buf, "w%0*u", width, index + 1);
  return buf;
}

Date synthetic_date(std::size_t slice) {
  return Date{std::chrono::year{2000} / std::chrono::January / 1} + std::chrono::days{static_cast<int>(slice)};
}

SyntheticDataset generate_dataset(const SynthSpec& spec, unsigned threads) {
  spec.validate();
  SyntheticDataset out;
  out.spec = spec;

  auto init_rng = substream(spec.seed, {0});
  auto model = init_factors(spec, init_rng);
  const std::span<const double> zipf =
      spec.zipf_enabled ? std::span<const double>(model.zipf) : std::span<const double>{};

  CorpusAssembler assembler(Granularity::day);
  for (std::uint32_t i = 0; i < spec.vocab_size; ++i) {
    const auto id = assembler.intern(synthetic_term(i, spec.vocab_size));
    if (i < spec.n_stopwords) assembler.mark_stopword(id);
  }
  assembler.ensure_range(synthetic_date(0), synthetic_date(spec.n_slices - 1));

  for (std::size_t j = 0; j < kFactorCount; ++j) {
    FactorTrace trace;
    trace.factor = j;
    trace.target = spec.target_functions[j];
    trace.reference_term = synthetic_term(spec.reference_word(j), spec.vocab_size);
    trace.change_counts.resize(spec.n_slices);
    out.traces.push_back(std::move(trace));
  }

  using Dist = std::discrete_distribution<std::uint32_t>;
  const Dist::param_type factor_choice(spec.factor_weights.begin(), spec.factor_weights.end());

  for (std::uint32_t t = 1; t <= spec.n_slices; ++t) {
    std::vector<Dist::param_type> token_params;
    for (std::size_t j = 0; j < kFactorCount; ++j) {
      auto& factor = model.factors[j];
      const auto k = target_change_count(factor.target, t, spec.n_slices, spec.peak_changes_per_slice);
      auto rng = substream(spec.seed, {1, j, t});
      auto changed = apply_changes(std::move(factor), k, spec.case_mix, spec, rng);
      factor = std::move(changed.state);
      out.skipped_changes += changed.skipped;
      out.traces[j].change_counts[t - 1] = k;
      const auto p = document_distribution(zipf, factor);
      token_params.emplace_back(p.begin(), p.end());
    }

    auto count_rng = substream(spec.seed, {2, t});
    const auto n_docs = std::poisson_distribution<std::uint32_t>(spec.mean_docs_per_slice)(count_rng);
    std::vector<std::vector<std::uint32_t>> docs(n_docs);
    std::vector<std::uint32_t> doc_factor(n_docs);
    parallel_for(n_docs, threads, [&](std::size_t d) {
      auto rng = substream(spec.seed, {3, t, d});
      Dist dist;
      const auto j = dist(rng, factor_choice);
      const auto n_tokens =
          std::max<std::uint32_t>(1, std::poisson_distribution<std::uint32_t>(spec.mean_tokens_per_doc)(rng));
      auto& tokens = docs[d];
      tokens.resize(n_tokens);
      for (auto& token : tokens) token = dist(rng, token_params[j]);
      doc_factor[d] = j;
    });

    const auto date = synthetic_date(t - 1);
    for (std::uint32_t d = 0; d < n_docs; ++d) {
      char id[32];
      std::snprintf(id, sizeof id, "s%05u-d%07u", t - 1, d);
      std::vector<std::vector<std::uint32_t>> sentences(1);
      sentences[0] = std::move(docs[d]);
      assembler.add_document(id, date, std::move(sentences));
      ++out.documents_per_factor[doc_factor[d]];
    }
  }

  if (assembler.document_count() == 0) throw DataError("synthetic spec produced no documents");
  out.corpus = std::move(assembler).finish(1);

  for (std::size_t j = 0; j < kFactorCount; ++j) {
    const auto id = out.corpus.vocab.find(out.traces[j].reference_term);
    if (!id) throw DataError("reference word " + out.traces[j].reference_term + " was never sampled");
    out.reference_terms.push_back(*id);
    auto& trace = out.traces[j];
    const auto peak = *std::max_element(trace.change_counts.begin(), trace.change_counts.end());
    trace.normalized.resize(trace.change_counts.size());
    for (std::size_t t = 0; t < trace.change_counts.size(); ++t)
      trace.normalized[t] = peak == 0 ? 0.0 : static_cast<double>(trace.change_counts[t]) / peak;
  }
  return out;
}

std::vector<RawDocument> to_raw_documents(const SyntheticDataset& dataset) {
  std::vector<RawDocument> docs;
  const auto& corpus = dataset.corpus;
  docs.reserve(corpus.document_count());
  for (const auto& slice : corpus.slices) {
    const auto date = format_date(synthetic_date(slice.index));
    for (std::size_t d = 0; d < slice.documents.size(); ++d) {
      std::string text;
      for (const auto& sentence : slice.documents[d]) {
        for (std::size_t i = 0; i < sentence.size(); ++i) {
          if (i) text.push_back(' ');
          text += corpus.vocab.term(sentence[i]);
        }
        text += ". ";
      }
      if (!text.empty()) text.pop_back();
      docs.push_back({slice.document_ids[d], date, std::move(text)});
    }
  }
  return docs;
}

void write_stopwords(std::ostream& out, const SynthSpec& spec) {
  for (std::uint32_t i = 0; i < spec.n_stopwords; ++i) out << synthetic_term(i, spec.vocab_size) << '\n';
}

void write_ground_truth_csv(std::ostream& out, const SyntheticDataset& dataset) {
  out << "factor,target_function,slice,normalized_change\n";
  for (const auto& trace : dataset.traces)
    for (std::size_t t = 0; t < trace.normalized.size(); ++t)
      out << trace.factor + 1 << ',' << to_string(trace.target) << ',' << t << ','
          << format_double(trace.normalized[t]) << '\n';
}

}  // namespace volatext
