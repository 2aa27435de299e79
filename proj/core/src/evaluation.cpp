#include "volatext/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "volatext/format.hpp"

namespace volatext {

std::vector<Series> normalize_series(std::span<const Series> family) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : family)
    for (const auto& v : s)
      if (v) {
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
  if (lo > hi) throw std::invalid_argument("normalize_series: no values present");
  std::vector<Series> out;
  out.reserve(family.size());
  for (const auto& s : family) {
    Series n(s.size());
    for (std::size_t t = 0; t < s.size(); ++t)
      if (s[t]) n[t] = hi > lo ? (*s[t] - lo) / (hi - lo) : 0.0;
    out.push_back(std::move(n));
  }
  return out;
}

std::optional<double> mean_distance(std::span<const std::optional<double>> series, std::span<const double> target) {
  if (series.size() != target.size()) throw std::invalid_argument("mean_distance: length mismatch");
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < series.size(); ++t)
    if (series[t]) {
      sum += std::abs(*series[t] - target[t]);
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

const EstimatorScores& SeedResult::row(Estimator estimator) const {
  for (const auto& r : rows)
    if (r.estimator == estimator) return r;
  throw std::out_of_range("estimator not part of this benchmark run");
}

double SeedResult::score(Estimator estimator, char dataset, std::span<const char> datasets) const {
  const auto it = std::find(datasets.begin(), datasets.end(), dataset);
  if (it == datasets.end()) throw std::out_of_range("dataset not part of this benchmark run");
  return row(estimator).per_dataset.at(static_cast<std::size_t>(it - datasets.begin()));
}

std::uint64_t dataset_seed(std::uint64_t seed, char dataset) {
  auto rng = substream(seed, {0xda7a5e7ULL, static_cast<std::uint64_t>(dataset)});
  return rng();
}

DatasetSeries dataset_series(const SynthSpec& spec, char dataset, std::span<const Estimator> estimators,
                             std::uint32_t h, Measure measure, const CoocOptions& cooc, unsigned threads) {
  const auto generated = generate_dataset(spec, threads);
  CoocOptions options = cooc;
  options.focus = generated.reference_terms;
  const bool with_global = std::any_of(estimators.begin(), estimators.end(), uses_global_statistic);
  const auto stats = CorpusStatistics::compute(generated.corpus, measure, options, with_global, threads);
  const auto series = volatility_series(stats, generated.reference_terms, estimators, h, threads);

  DatasetSeries out;
  out.dataset = dataset;
  out.traces = generated.traces;
  for (auto id : generated.reference_terms) out.words.push_back(generated.corpus.vocab.term(id));
  out.by_estimator.resize(estimators.size());
  // volatility_series orders output by word, then estimator.
  for (std::size_t w = 0; w < generated.reference_terms.size(); ++w)
    for (std::size_t e = 0; e < estimators.size(); ++e)
      out.by_estimator[e].push_back(series[w * estimators.size() + e]);
  return out;
}

namespace {

double mean_of_defined(const std::vector<std::optional<double>>& values, std::size_t& undefined) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    } else {
      ++undefined;
    }
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

SummaryCell summarize(const std::vector<double>& values) {
  SummaryCell cell;
  if (values.empty()) return cell;
  cell.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - cell.mean) * (v - cell.mean);
    cell.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return cell;
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig& config) {
  if (config.seeds.empty()) throw ConfigError("benchmark needs at least one seed");
  if (config.datasets.empty()) throw ConfigError("benchmark needs at least one dataset");
  if (config.estimators.empty()) throw ConfigError("benchmark needs at least one estimator");

  BenchmarkResult result;
  result.config = config;
  const std::size_t n_est = config.estimators.size();
  const std::size_t n_ds = config.datasets.size();

  for (auto seed : config.seeds) {
    std::vector<DatasetSeries> runs;
    for (char ds : config.datasets) {
      auto spec = preset(ds, config.base);
      spec.seed = dataset_seed(seed, ds);
      runs.push_back(dataset_series(spec, ds, config.estimators, config.h, config.measure, config.cooc,
                                    config.threads));
    }

    SeedResult seed_result;
    seed_result.seed = seed;
    for (std::size_t e = 0; e < n_est; ++e) {
      std::vector<Series> family;
      for (const auto& run : runs)
        for (const auto& s : run.by_estimator[e]) family.push_back(s.values);
      const auto normalized = normalize_series(family);

      EstimatorScores row;
      row.estimator = config.estimators[e];
      std::size_t k = 0;
      for (const auto& run : runs) {
        std::vector<std::optional<double>> distances;
        for (std::size_t f = 0; f < run.by_estimator[e].size(); ++f, ++k) {
          const auto d = mean_distance(normalized[k], run.traces[f].normalized);
          distances.push_back(d);
          result.words.push_back({seed, row.estimator, run.dataset, run.words[f], run.traces[f].target, d});
        }
        row.per_dataset.push_back(mean_of_defined(distances, seed_result.undefined_words));
      }
      row.grand_mean = std::accumulate(row.per_dataset.begin(), row.per_dataset.end(), 0.0) /
                       static_cast<double>(row.per_dataset.size());
      seed_result.rows.push_back(std::move(row));
    }
    result.seeds.push_back(std::move(seed_result));
  }

  for (std::size_t e = 0; e < n_est; ++e) {
    SummaryRow row;
    row.estimator = config.estimators[e];
    for (std::size_t d = 0; d < n_ds; ++d) {
      std::vector<double> values;
      for (const auto& s : result.seeds) values.push_back(s.rows[e].per_dataset[d]);
      row.per_dataset.push_back(summarize(values));
    }
    std::vector<double> grand;
    for (const auto& s : result.seeds) grand.push_back(s.rows[e].grand_mean);
    row.grand_mean = summarize(grand);
    result.summary.push_back(std::move(row));
  }
  return result;
}

std::vector<BoostRow> run_boost_benchmark(const BoostConfig& config) {
  const auto& bench = config.benchmark;
  if (bench.seeds.empty()) throw ConfigError("benchmark needs at least one seed");
  std::vector<BoostRow> rows;
  for (auto seed : bench.seeds) {
    auto spec = preset(config.dataset, bench.base);
    spec.seed = dataset_seed(seed, config.dataset);
    const auto plain = dataset_series(spec, config.dataset, bench.estimators, bench.h, bench.measure, bench.cooc,
                                      bench.threads);
    const auto boosted_spec = boost_factor(spec, config.factor, config.multiplier);
    const auto boosted = dataset_series(boosted_spec, config.dataset, bench.estimators, bench.h, bench.measure,
                                        bench.cooc, bench.threads);

    for (std::size_t e = 0; e < bench.estimators.size(); ++e) {
      std::vector<Series> family;
      for (const auto& s : boosted.by_estimator[e]) family.push_back(s.values);
      const auto normalized = normalize_series(family);
      for (auto f : config.report_factors) {
        BoostRow row;
        row.seed = seed;
        row.estimator = bench.estimators[e];
        row.factor = f;
        row.target = boosted.traces.at(f).target;
        row.mean_distance = mean_distance(normalized.at(f), boosted.traces[f].normalized);
        std::size_t ignored = 0;
        std::vector<std::optional<double>> raw_b(boosted.by_estimator[e][f].values);
        std::vector<std::optional<double>> raw_p(plain.by_estimator[e][f].values);
        row.boosted_mean = mean_of_defined(raw_b, ignored);
        row.unboosted_mean = mean_of_defined(raw_p, ignored);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_word_scores_csv(std::ostream& out, std::span<const WordScore> words) {
  out << "estimator,dataset,word,target_function,mean_distance,seed\n";
  for (const auto& w : words)
    out << to_string(w.estimator) << ',' << w.dataset << ',' << w.word << ',' << to_string(w.target) << ','
        << format_optional(w.mean_distance) << ',' << w.seed << '\n';
}

void write_summary_csv(std::ostream& out, const BenchmarkResult& result) {
  out << "estimator";
  for (char ds : result.config.datasets) out << ',' << ds << ',' << ds << "_sd";
  out << ",mean,mean_sd,seeds\n";
  for (const auto& row : result.summary) {
    out << to_string(row.estimator);
    for (const auto& cell : row.per_dataset) out << ',' << format_double(cell.mean) << ',' << format_double(cell.sd);
    out << ',' << format_double(row.grand_mean.mean) << ',' << format_double(row.grand_mean.sd) << ','
        << result.seeds.size() << '\n';
  }
}

void write_boost_csv(std::ostream& out, std::span<const BoostRow> rows) {
  out << "seed,estimator,factor,target_function,mean_distance,boosted_mean,unboosted_mean\n";
  for (const auto& r : rows)
    out << r.seed << ',' << to_string(r.estimator) << ',' << r.factor + 1 << ',' << to_string(r.target) << ','
        << format_optional(r.mean_distance) << ',' << format_double(r.boosted_mean) << ','
        << format_double(r.unboosted_mean) << '\n';
}

}  // namespace volatext
