// Acceptance suite. Prints one PASS/FAIL line per criterion, preceded by the
// measurements it was judged on. Exit status is 0 only when every criterion
// that was run passed (a waived criterion does not count as a failure).
//
//   volatext_acceptance            run everything
//   volatext_acceptance 3 4        run selected criteria

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "support/dense_oracle.hpp"
#include "volatext/corpus_io.hpp"
#include "volatext/evaluation.hpp"
#include "volatext/synthgen.hpp"
#include "volatext/volatility.hpp"

namespace {

using namespace volatext;
using Clock = std::chrono::steady_clock;

// Pinned thresholds.
constexpr std::size_t kSeeds = 5;
constexpr std::size_t kRequiredSeeds = 4;
constexpr double kMinMaxGrandLow = 0.10;
constexpr double kMinMaxGrandHigh = 0.28;
constexpr double kQuarterScaleSeconds = 60.0;
constexpr double kBoostTriangleMax = 0.25;
constexpr double kOracleTolerance = 1e-12;
constexpr std::size_t kOracleInstances = 40;
constexpr double kRealDataSeconds = 300.0;
constexpr std::size_t kRealDataMinArticles = 5000;

struct Outcome {
  enum class State { pass, fail, waived } state;
  std::string detail;
};

void report(int id, const std::string& name, const Outcome& o) {
  const char* tag = o.state == Outcome::State::pass ? "PASS" : o.state == Outcome::State::fail ? "FAIL" : "WAIVED";
  std::cout << "[" << tag << "] criterion " << id << ": " << name << " -- " << o.detail << std::endl;
}

std::string fmt(double v, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::uint64_t> seed_list() {
  std::vector<std::uint64_t> seeds(kSeeds);
  for (std::size_t i = 0; i < kSeeds; ++i) seeds[i] = i + 1;
  return seeds;
}

// ---------------------------------------------------------------- criterion 1

struct OrderingCounts {
  std::size_t c_sig_family_wins = 0;
  std::size_t b_top_two = 0;
  std::size_t grand_in_band = 0;
};

OrderingCounts check_orderings(const BenchmarkResult& r, const std::string& scale) {
  const auto& ds = r.config.datasets;
  OrderingCounts counts;
  for (const auto& s : r.seeds) {
    auto score = [&](Estimator e, char d) { return s.score(e, d, ds); };
    const double worst_sig_family = std::max(
        {score(Estimator::sig, 'C'), score(Estimator::global_sig, 'C'), score(Estimator::minmax, 'C')});
    const double best_rank_family = std::min(score(Estimator::baseline, 'C'), score(Estimator::global_baseline, 'C'));
    const bool a = worst_sig_family < best_rank_family;

    std::vector<std::pair<double, Estimator>> b_rank;
    for (auto e : kAllEstimators) b_rank.push_back({score(e, 'B'), e});
    std::sort(b_rank.begin(), b_rank.end());
    const std::set<Estimator> top{b_rank[0].second, b_rank[1].second};
    const bool b = top == std::set<Estimator>{Estimator::baseline, Estimator::minmax};

    const double grand = s.row(Estimator::minmax).grand_mean;
    const bool c = grand >= kMinMaxGrandLow && grand <= kMinMaxGrandHigh;

    counts.c_sig_family_wins += a;
    counts.b_top_two += b;
    counts.grand_in_band += c;

    std::cout << "  " << scale << " seed " << s.seed << ":";
    for (const auto& row : s.rows) {
      std::cout << ' ' << to_string(row.estimator) << '=';
      for (std::size_t d = 0; d < ds.size(); ++d) std::cout << (d ? "/" : "") << fmt(row.per_dataset[d]);
      std::cout << '(' << fmt(row.grand_mean) << ')';
    }
    std::cout << "  [a=" << a << " b=" << b << " c=" << c << "]" << std::endl;
  }
  return counts;
}

bool counts_ok(const OrderingCounts& c) {
  return c.c_sig_family_wins >= kRequiredSeeds && c.b_top_two >= kRequiredSeeds && c.grand_in_band >= kRequiredSeeds;
}

std::string counts_text(const OrderingCounts& c) {
  return "C sig-family<rank-family " + std::to_string(c.c_sig_family_wins) + "/" + std::to_string(kSeeds) +
         ", B top-two baseline+minmax " + std::to_string(c.b_top_two) + "/" + std::to_string(kSeeds) +
         ", minmax grand mean in band " + std::to_string(c.grand_in_band) + "/" + std::to_string(kSeeds);
}

Outcome criterion_table_orderings() {
  BenchmarkConfig full_scale;
  full_scale.seeds = seed_list();
  const auto t0 = Clock::now();
  const auto full = run_benchmark(full_scale);
  const double full_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  const auto full_counts = check_orderings(full, "full-scale");
  for (const auto& row : full.summary)
    std::cout << "  full-scale mean " << to_string(row.estimator) << ": A=" << fmt(row.per_dataset[0].mean)
              << " B=" << fmt(row.per_dataset[1].mean) << " C=" << fmt(row.per_dataset[2].mean)
              << " grand=" << fmt(row.grand_mean.mean) << " (sd " << fmt(row.grand_mean.sd) << ")" << std::endl;

  BenchmarkConfig quarter;
  quarter.base.n_slices = 50;
  quarter.base.mean_docs_per_slice = 250;
  double slowest = 0;
  std::vector<SeedResult> quarter_seeds;
  BenchmarkResult quarter_all;
  for (auto seed : seed_list()) {
    quarter.seeds = {seed};
    const auto q0 = Clock::now();
    auto r = run_benchmark(quarter);
    slowest = std::max(slowest, std::chrono::duration<double>(Clock::now() - q0).count());
    quarter_all.config = r.config;
    quarter_all.seeds.push_back(std::move(r.seeds.front()));
  }
  const auto quarter_counts = check_orderings(quarter_all, "quarter-scale");

  const bool ok = counts_ok(full_counts) && counts_ok(quarter_counts) && slowest < kQuarterScaleSeconds;
  return {ok ? Outcome::State::pass : Outcome::State::fail,
          "full scale (" + fmt(full_seconds, 1) + " s for " + std::to_string(kSeeds) + " seeds): " +
              counts_text(full_counts) + "; quarter scale: " + counts_text(quarter_counts) +
              ", slowest seed " + fmt(slowest, 1) + " s (limit " + fmt(kQuarterScaleSeconds, 0) + " s)"};
}

// ---------------------------------------------------------------- criterion 2

Outcome criterion_frequency_robustness() {
  BoostConfig cfg;
  cfg.benchmark.seeds = seed_list();
  cfg.factor = 0;
  cfg.multiplier = 5;
  cfg.report_factors = {0, 1};
  const auto rows = run_boost_benchmark(cfg);

  std::map<std::uint64_t, std::map<Estimator, double>> triangle;
  for (const auto& r : rows) {
    std::cout << "  seed " << r.seed << " " << to_string(r.estimator) << " " << to_string(r.target)
              << " distance=" << (r.mean_distance ? fmt(*r.mean_distance) : std::string("n/a"))
              << " raw mean boosted/unboosted=" << fmt(r.boosted_mean, 4) << "/" << fmt(r.unboosted_mean, 4)
              << std::endl;
    if (r.factor == 0 && r.mean_distance) triangle[r.seed][r.estimator] = *r.mean_distance;
  }
  std::size_t minmax_beats_sig = 0;
  double minmax_sum = 0;
  for (const auto& [seed, by_est] : triangle) {
    minmax_beats_sig += by_est.at(Estimator::minmax) < by_est.at(Estimator::sig);
    minmax_sum += by_est.at(Estimator::minmax);
  }
  const double minmax_mean = minmax_sum / static_cast<double>(triangle.size());
  const bool ok = triangle.size() == kSeeds && minmax_beats_sig >= kRequiredSeeds && minmax_mean <= kBoostTriangleMax;
  return {ok ? Outcome::State::pass : Outcome::State::fail,
          "minmax triangle < sig triangle in " + std::to_string(minmax_beats_sig) + "/" + std::to_string(kSeeds) +
              " seeds (need " + std::to_string(kRequiredSeeds) + "), mean minmax triangle distance " +
              fmt(minmax_mean) + " (limit " + fmt(kBoostTriangleMax, 2) + ")"};
}

// ---------------------------------------------------------------- criterion 3

Outcome criterion_minmax_oracle() {
  // Worked example: slice 1 ranks {x:1, y:2}, slice 2 ranks {x:1, z:2}.
  using Triple = SymmetricMatrix<double>::Triple;
  std::vector<Triple> s0{{0, 1, 0.9}, {0, 2, 0.5}};
  std::vector<Triple> s1{{0, 1, 0.9}, {0, 3, 0.5}};
  std::vector<SigSlice> slices{{0, Measure::dice, SymmetricMatrix<double>::from_pairs(4, s0)},
                               {1, Measure::dice, SymmetricMatrix<double>::from_pairs(4, s1)}};
  const CorpusStatistics worked(std::move(slices), std::nullopt);
  const double worked_value = *volatility_series(worked, 0, Estimator::minmax, 2).values[1];
  const double worked_error = std::abs(worked_value - 1.0 / 3.0);

  std::mt19937_64 rng(20240601);
  double worst = 0;
  std::size_t compared = 0;
  std::size_t mismatched_presence = 0;
  for (std::size_t i = 0; i < kOracleInstances; ++i) {
    const std::uint32_t v = 4 + static_cast<std::uint32_t>(i % 17);  // <= 20
    const std::size_t n_slices = 2 + i % 3;                           // <= 4
    const auto toy = oracle::random_toy(rng, v, n_slices, 6, 5);
    const auto stats = CorpusStatistics::compute(oracle::to_sliced(toy), Measure::dice, {}, false, 1);
    const oracle::DenseModel dense(toy, Measure::dice);
    for (std::uint32_t h = 2; h <= n_slices; ++h)
      for (TermId w = 0; w < v; ++w) {
        const auto got = volatility_series(stats, w, Estimator::minmax, h).values;
        const auto want = dense.series(w, Estimator::minmax, h);
        for (std::size_t t = 0; t < want.size(); ++t) {
          if (got[t].has_value() != want[t].has_value()) {
            ++mismatched_presence;
            continue;
          }
          if (!want[t]) continue;
          worst = std::max(worst, std::abs(*got[t] - *want[t]));
          ++compared;
        }
      }
  }
  const bool ok = worked_error <= kOracleTolerance && worst <= kOracleTolerance && mismatched_presence == 0;
  char worst_text[32];
  std::snprintf(worst_text, sizeof worst_text, "%.3g", worst);
  return {ok ? Outcome::State::pass : Outcome::State::fail,
          "worked example " + fmt(worked_value, 15) + " vs 1/3; " + std::to_string(kOracleInstances) +
              " random instances, " + std::to_string(compared) + " window values, max abs error " + worst_text +
              ", presence mismatches " + std::to_string(mismatched_presence)};
}

// ---------------------------------------------------------------- criterion 4

struct Check {
  std::string name;
  bool ok;
};

Check minmax_unit_interval() {
  std::mt19937_64 rng(17);
  std::size_t values = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto toy = oracle::random_toy(rng, 30, 6, 15, 7, trial % 4);
    const auto m = trial % 3 == 0 ? Measure::dice : trial % 3 == 1 ? Measure::llr : Measure::mi;
    const auto stats = CorpusStatistics::compute(oracle::to_sliced(toy), m, {}, false, 1);
    for (std::uint32_t h = 2; h <= 6; ++h)
      for (TermId w = 0; w < 30; ++w)
        for (const auto& v : volatility_series(stats, w, Estimator::minmax, h).values) {
          if (!v) continue;
          ++values;
          if (!(*v >= 0.0 && *v <= 1.0)) return {"minmax in [0,1]", false};
        }
  }
  return {"minmax in [0,1] over " + std::to_string(values) + " fuzzed values", values > 0};
}

SigSlice scale_slice(const SigSlice& s, double c) {
  std::vector<SymmetricMatrix<double>::Triple> pairs;
  s.sig.for_each_pair([&](TermId a, TermId b, double v) { pairs.push_back({a, b, v * c}); });
  return {s.slice_index, s.measure, SymmetricMatrix<double>::from_pairs(s.sig.n_terms(), pairs)};
}

Check scale_invariance() {
  std::mt19937_64 rng(23);
  const Estimator rank_based[] = {Estimator::minmax, Estimator::baseline, Estimator::global_baseline};
  for (double c : {0.01, 3.7, 1e6}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto toy = oracle::random_toy(rng, 25, 5, 12, 6);
      const auto base = CorpusStatistics::compute(oracle::to_sliced(toy), Measure::llr, {}, true, 1);
      std::vector<SigSlice> scaled;
      for (std::size_t t = 0; t < base.slice_count(); ++t) scaled.push_back(scale_slice(base.slice(t), c));
      GlobalSig g{base.measure(), scale_slice({0, base.measure(), base.global()->sig}, c).sig};
      const CorpusStatistics other(std::move(scaled), std::move(g));
      for (TermId w = 0; w < 25; ++w) {
        const auto a = volatility_series(base, w, rank_based, 3);
        const auto b = volatility_series(other, w, rank_based, 3);
        for (std::size_t e = 0; e < a.size(); ++e)
          if (a[e].values != b[e].values) return {"rank invariance under significance scaling", false};
      }
    }
  }
  return {"minmax/baseline unchanged under significance scaling", true};
}

Check stationary_zero() {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    auto toy = oracle::random_toy(rng, 30, 1, 25, 6, trial % 3);
    toy.slices.assign(5, toy.slices.front());
    const auto stats = CorpusStatistics::compute(oracle::to_sliced(toy), Measure::dice, {}, true, 1);
    for (TermId w = 0; w < 30; ++w)
      for (const auto& s : volatility_series(stats, w, kAllEstimators, 3))
        for (const auto& v : s.values)
          if (v && *v != 0.0) return {"stationary corpus gives zero series", false};
  }
  return {"stationary corpus gives all-zero series", true};
}

Check dataset_b_support() {
  const auto spec = preset('B');
  auto rng = substream(spec.seed, {0});
  const auto model = init_factors(spec, rng);
  for (auto f : model.factors) {
    auto support = [&](const FactorState& s) {
      std::set<std::uint32_t> out;
      for (std::uint32_t i = 0; i < s.values.size(); ++i)
        if (s.values[i] > spec.background_value) out.insert(i);
      return out;
    };
    const auto initial = support(f);
    for (std::uint32_t t = 1; t <= spec.n_slices; ++t) {
      auto r = substream(spec.seed, {1, f.index, t});
      const auto k = target_change_count(f.target, t, spec.n_slices, spec.peak_changes_per_slice);
      f = apply_changes(std::move(f), k, spec.case_mix, spec, r).state;
      if (support(f) != initial) return {"dataset B support constancy", false};
    }
  }
  return {"dataset B context support constant over all slices", true};
}

std::string run_pipeline_csv(unsigned threads) {
  SynthSpec spec = preset('A');
  spec.n_slices = 12;
  spec.mean_docs_per_slice = 60;
  const auto d = generate_dataset(spec, threads);
  const auto stats = CorpusStatistics::compute(d.corpus, Measure::dice, {}, true, threads);
  std::vector<TermId> words;
  for (TermId t = 0; t < d.corpus.vocab.size(); t += 7) words.push_back(t);
  std::ostringstream out;
  write_series_csv(out, volatility_series(stats, words, kAllEstimators, 3, threads), d.corpus);
  write_frequency_csv(out, words, d.corpus);

  BenchmarkConfig bench;
  bench.base.n_slices = 10;
  bench.base.mean_docs_per_slice = 80;
  bench.seeds = {1, 2};
  bench.threads = threads;
  const auto r = run_benchmark(bench);
  write_word_scores_csv(out, r.words);
  write_summary_csv(out, r);
  return out.str();
}

#ifdef VOLATEXT_CLI_PATH
std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string run_cli_csv(unsigned threads, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string cli = VOLATEXT_CLI_PATH;
  const std::string t = " --threads " + std::to_string(threads);
  const std::string d = dir.string();
  const std::string cmds[] = {
      cli + " synth --preset A --slices 8 --docs 60 --seed 3 --out " + d + "/synth" + t,
      cli + " ingest --input " + d + "/synth/corpus.jsonl --granularity day --min-term-freq 1 --stopwords " + d +
          "/synth/stopwords.txt --out " + d + "/ingest" + t,
      cli + " volatility --corpus " + d + "/ingest/corpus.vtx --estimator all --history 3 --out " + d + "/vol" + t,
  };
  for (const auto& c : cmds)
    if (std::system((c + " > /dev/null 2>&1").c_str()) != 0) return "command failed: " + c;
  return read_file(dir / "vol" / "series.csv") + read_file(dir / "vol" / "frequency.csv");
}
#endif

Check thread_determinism() {
  const auto one = run_pipeline_csv(1);
  for (unsigned threads : {2u, 4u})
    if (run_pipeline_csv(threads) != one) return {"bit-identical CSVs across thread counts", false};
#ifdef VOLATEXT_CLI_PATH
  const auto base = std::filesystem::temp_directory_path() / ("volatext_acceptance_" + std::to_string(::getpid()));
  const auto cli_one = run_cli_csv(1, base / "t1");
  const auto cli_four = run_cli_csv(4, base / "t4");
  std::filesystem::remove_all(base);
  if (cli_one.rfind("command failed", 0) == 0) return {cli_one, false};
  if (cli_one != cli_four) return {"bit-identical CLI CSVs across thread counts", false};
  return {"bit-identical library and CLI CSVs for 1/2/4 threads", true};
#else
  return {"bit-identical library CSVs for 1/2/4 threads", true};
#endif
}

Outcome criterion_invariants() {
  const std::function<Check()> checks[] = {minmax_unit_interval, scale_invariance, stationary_zero,
                                           dataset_b_support, thread_determinism};
  bool ok = true;
  std::string detail;
  for (const auto& fn : checks) {
    const auto t0 = Clock::now();
    const auto c = fn();
    std::cout << "  " << (c.ok ? "ok   " : "FAIL ") << c.name << " ("
              << fmt(std::chrono::duration<double>(Clock::now() - t0).count(), 1) << " s)" << std::endl;
    ok = ok && c.ok;
    detail += (detail.empty() ? "" : "; ") + c.name + (c.ok ? "" : " FAILED");
  }
  return {ok ? Outcome::State::pass : Outcome::State::fail, detail};
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion_real_data() {
  const char* path = std::getenv("VOLATEXT_REAL_CORPUS");
  if (path == nullptr || *path == '\0')
    return {Outcome::State::waived, "set VOLATEXT_REAL_CORPUS to a news JSONL file to run this check"};

  const auto t0 = Clock::now();
  std::ifstream in(path);
  if (!in) return {Outcome::State::fail, std::string("cannot open ") + path};
  CorpusBuildOptions opt;
  opt.granularity = Granularity::week;
  if (const char* stop = std::getenv("VOLATEXT_REAL_STOPWORDS")) {
    std::ifstream s(stop);
    opt.tokenizer.stopwords = read_stopwords(s);
  }
  const auto ingested = ingest_jsonl(in, opt);
  const auto& corpus = ingested.corpus;
  const auto cameron = corpus.vocab.find("cameron");
  if (!cameron) return {Outcome::State::fail, "term 'cameron' not in vocabulary"};
  CoocOptions cooc;
  cooc.focus = {*cameron};
  const auto stats = CorpusStatistics::compute(corpus, Measure::dice, cooc, false, 0);
  const auto series = volatility_series(stats, *cameron, Estimator::minmax, 3);
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();

  const auto week = bucket_key(*parse_date("2016-06-23"), Granularity::week);
  std::optional<std::size_t> ref;
  for (const auto& s : corpus.slices)
    if (s.bucket == week) ref = s.index;
  if (!ref) return {Outcome::State::fail, "corpus does not cover the referendum week"};
  auto mean_over = [&](std::size_t from, std::size_t to) {
    double sum = 0;
    std::size_t n = 0;
    for (std::size_t t = from; t < to && t < series.values.size(); ++t)
      if (series.values[t]) {
        sum += *series.values[t];
        ++n;
      }
    return n ? sum / static_cast<double>(n) : std::nan("");
  };
  const double before = mean_over(*ref >= 6 ? *ref - 6 : 0, *ref);
  const double after = mean_over(*ref + 1, *ref + 7);
  const bool ok = ingested.report.accepted >= kRealDataMinArticles && seconds < kRealDataSeconds && after < before;
  return {ok ? Outcome::State::pass : Outcome::State::fail,
          std::to_string(ingested.report.accepted) + " articles in " + fmt(seconds, 1) + " s; cameron minmax mean " +
              fmt(before) + " before vs " + fmt(after) + " after the referendum week"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  auto wanted = [&](int id) { return selected.empty() || selected.count(id) != 0; };

  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "estimator orderings on synthetic datasets A/B/C", criterion_table_orderings},
      {2, "frequency robustness under a 5x boosted factor", criterion_frequency_robustness},
      {3, "minmax against a dense brute-force oracle", criterion_minmax_oracle},
      {4, "invariant suite", criterion_invariants},
      {5, "real news corpus pipeline", criterion_real_data},
  };

  std::vector<std::pair<const Criterion*, Outcome>> results;
  for (const auto& c : criteria) {
    if (!wanted(c.id)) continue;
    std::cout << "== criterion " << c.id << ": " << c.name << std::endl;
    const auto t0 = Clock::now();
    Outcome o{Outcome::State::fail, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Outcome::State::fail, std::string("exception: ") + e.what()};
    }
    std::cout << "  (" << fmt(std::chrono::duration<double>(Clock::now() - t0).count(), 1) << " s)" << std::endl;
    results.push_back({&c, std::move(o)});
  }

  std::cout << "\n== summary" << std::endl;
  bool all_ok = true;
  for (const auto& [c, o] : results) {
    report(c->id, c->name, o);
    all_ok = all_ok && o.state != Outcome::State::fail;
  }
  return all_ok ? 0 : 1;
}
