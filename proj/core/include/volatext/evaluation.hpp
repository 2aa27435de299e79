#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volatext/synthgen.hpp"
#include "volatext/volatility.hpp"

namespace volatext {

using Series = std::vector<std::optional<double>>;

/// Min-max normalises a family of series with one shared frame: the global
/// minimum maps to 0 and the global maximum to 1. Missing values stay
/// missing; a constant family maps to all zeros. Throws std::invalid_argument
/// if no value is present.
std::vector<Series> normalize_series(std::span<const Series> family);

/// Mean |series[t] - target[t]| over the slices where the series has a
/// value; nullopt if it has none. Throws std::invalid_argument on a length
/// mismatch.
std::optional<double> mean_distance(std::span<const std::optional<double>> series, std::span<const double> target);

struct BenchmarkConfig {
  /// Scale and generator settings; case mix and Zipf switch are overridden
  /// by each dataset preset.
  SynthSpec base;
  std::vector<char> datasets{'A', 'B', 'C'};
  std::vector<Estimator> estimators{std::begin(kAllEstimators), std::end(kAllEstimators)};
  std::uint32_t h = 2;
  Measure measure = Measure::dice;
  CoocOptions cooc;
  std::vector<std::uint64_t> seeds{1};
  unsigned threads = 0;
};

struct WordScore {
  std::uint64_t seed = 0;
  Estimator estimator = Estimator::minmax;
  char dataset = 'A';
  std::string word;
  TargetFunction target = TargetFunction::constant0;
  std::optional<double> mean_distance;
};

/// One summary row for one seed: mean distance per dataset (over the
/// reference words with a defined distance) and their arithmetic mean.
struct EstimatorScores {
  Estimator estimator = Estimator::minmax;
  std::vector<double> per_dataset;
  double grand_mean = 0;
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<EstimatorScores> rows;
  std::size_t undefined_words = 0;

  const EstimatorScores& row(Estimator estimator) const;
  double score(Estimator estimator, char dataset, std::span<const char> datasets) const;
};

struct SummaryCell {
  double mean = 0;
  double sd = 0;  // sample standard deviation across seeds, 0 for one seed
};

struct SummaryRow {
  Estimator estimator = Estimator::minmax;
  std::vector<SummaryCell> per_dataset;
  SummaryCell grand_mean;
};

struct BenchmarkResult {
  BenchmarkConfig config;
  std::vector<WordScore> words;
  std::vector<SeedResult> seeds;
  std::vector<SummaryRow> summary;
};

/// Raw (unnormalised) series of the reference words of one generated
/// dataset, in factor order, one vector per requested estimator.
struct DatasetSeries {
  char dataset = 'A';
  std::vector<std::vector<VolatilitySeries>> by_estimator;  // [estimator][factor]
  std::vector<FactorTrace> traces;
  std::vector<std::string> words;
};

/// Generates one dataset and computes the requested estimators for its
/// reference words.
DatasetSeries dataset_series(const SynthSpec& spec, char dataset, std::span<const Estimator> estimators,
                             std::uint32_t h, Measure measure, const CoocOptions& cooc, unsigned threads);

/// Seed of dataset `dataset` within benchmark run `seed`.
std::uint64_t dataset_seed(std::uint64_t seed, char dataset);

/// For every seed: generates the datasets, scores each estimator against the
/// target functions after normalising per estimator across all datasets of
/// that seed, then aggregates mean and sd across seeds.
BenchmarkResult run_benchmark(const BenchmarkConfig& config);

/// Frequency-robustness run: one dataset where `factor` is `multiplier` times
/// as likely as each other factor. Distances are normalised per estimator
/// over that dataset's reference words.
struct BoostRow {
  std::uint64_t seed = 0;
  Estimator estimator = Estimator::minmax;
  std::size_t factor = 0;
  TargetFunction target = TargetFunction::constant0;
  std::optional<double> mean_distance;
  /// Mean of the raw series in the boosted run and in an otherwise identical
  /// unboosted run.
  double boosted_mean = 0;
  double unboosted_mean = 0;
};

struct BoostConfig {
  BenchmarkConfig benchmark;
  char dataset = 'A';
  std::size_t factor = 0;
  std::uint32_t multiplier = 5;
  std::vector<std::size_t> report_factors{0, 1};
};

std::vector<BoostRow> run_boost_benchmark(const BoostConfig& config);

void write_word_scores_csv(std::ostream& out, std::span<const WordScore> words);
/// Summary layout: `estimator,<dataset>...,mean` plus `_sd` columns.
void write_summary_csv(std::ostream& out, const BenchmarkResult& result);
/// Boost layout: `seed,estimator,factor,target_function,mean_distance,boosted_mean,unboosted_mean`.
void write_boost_csv(std::ostream& out, std::span<const BoostRow> rows);

}  // namespace volatext
