// volatext command-line front end.
//
//   volatext synth      --preset A --seed 1 --out data/
//   volatext ingest     --input data/corpus.jsonl --granularity day --out run/
//   volatext cooc       --corpus run/corpus.vtx --measure dice --out run/cooc
//   volatext volatility --corpus run/corpus.vtx --estimator minmax --history 3 --out run/vol
//   volatext benchmark  --seeds 5 --out bench/
//
// Every command writes manifest.json into its output directory. Exit codes:
// 0 success, 1 usage or configuration error, 2 data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "volatext/calendar.hpp"
#include "volatext/cooccurrence.hpp"
#include "volatext/corpus_io.hpp"
#include "volatext/evaluation.hpp"
#include "volatext/parallel.hpp"
#include "volatext/synthgen.hpp"
#include "volatext/tokenizer.hpp"
#include "volatext/types.hpp"
#include "volatext/volatility.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

using namespace volatext;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Common {
  unsigned threads = 0;
  std::string out;
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw DataError("cannot write " + p.string());
  return f;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw DataError("cannot open " + p.string());
  return f;
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw DataError("cannot create " + dir + ": " + ec.message());
  return p;
}

void write_manifest(const fs::path& dir, const std::string& command, json config, json outputs) {
  json m;
  m["tool"] = "volatext";
  m["version"] = VOLATEXT_VERSION;
  m["command"] = command;
  m["config"] = std::move(config);
  m["outputs"] = std::move(outputs);
  open_out(dir / "manifest.json") << m.dump(2) << '\n';
}

std::vector<Estimator> resolve_estimators(const std::vector<std::string>& names) {
  std::vector<Estimator> out;
  for (const auto& n : names) {
    if (n == "all") {
      out.assign(std::begin(kAllEstimators), std::end(kAllEstimators));
      return out;
    }
    const auto e = parse_estimator(n);
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  }
  return out;
}

json estimator_names(const std::vector<Estimator>& es) {
  json a = json::array();
  for (auto e : es) a.push_back(std::string(to_string(e)));
  return a;
}

// Threads resolved to a concrete count so the manifest records it.
unsigned resolved_threads(const Common& c) { return c.threads == 0 ? default_thread_count() : c.threads; }

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)")->envname("VOLATEXT_THREADS");
  sub->add_option("--out", c.out, "Output directory")->required();
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::string input;
  std::string granularity = "week";
  std::uint64_t min_term_freq = 2;
  std::string stopwords;
  bool remove_stopwords = false;
  bool keep_case = false;
  std::string terminators = ".!?";
};

int cmd_ingest(const IngestArgs& a, const Common& c) {
  CorpusBuildOptions opt;
  opt.granularity = parse_granularity(a.granularity);
  opt.min_term_freq = a.min_term_freq;
  opt.threads = resolved_threads(c);
  opt.tokenizer.lowercase = !a.keep_case;
  opt.tokenizer.remove_stopwords = a.remove_stopwords;
  opt.tokenizer.sentence_terminators = a.terminators;
  if (!a.stopwords.empty()) {
    auto s = open_in(a.stopwords);
    opt.tokenizer.stopwords = read_stopwords(s);
  }
  const auto out = prepare_out(c.out);
  auto in = open_in(a.input);
  const auto result = ingest_jsonl(in, opt);
  save_corpus(out / "corpus.vtx", result.corpus);
  open_out(out / "report.json") << ingest_report_json(result.report) << '\n';

  write_manifest(out, "ingest",
                 {{"input", a.input},
                  {"granularity", std::string(to_string(opt.granularity))},
                  {"min_term_freq", a.min_term_freq},
                  {"stopwords", a.stopwords},
                  {"remove_stopwords", a.remove_stopwords},
                  {"lowercase", !a.keep_case},
                  {"sentence_terminators", a.terminators},
                  {"threads", opt.threads}},
                 {{"corpus", "corpus.vtx"},
                  {"report", "report.json"},
                  {"accepted", result.report.accepted},
                  {"rejected", result.report.rejected},
                  {"slices", result.report.slices},
                  {"vocabulary", result.corpus.vocab.size()}});
  std::fprintf(stderr, "ingest: %zu accepted, %zu rejected, %zu slices, %zu terms\n", result.report.accepted,
               result.report.rejected, result.report.slices, result.corpus.vocab.size());
  return 0;
}

// ---------------------------------------------------------------- shared term selection

struct TermSelection {
  std::vector<TermId> ids;
  std::vector<std::string> unknown;
};

TermSelection select_terms(const SlicedCorpus& corpus, const std::vector<std::string>& names,
                           std::uint64_t min_term_freq) {
  TermSelection s;
  if (names.empty()) {
    for (TermId t = 0; t < corpus.vocab.size(); ++t)
      if (!corpus.vocab.is_stopword(t) && corpus.vocab.frequency(t) >= min_term_freq) s.ids.push_back(t);
    return s;
  }
  std::set<TermId> seen;
  for (const auto& n : names) {
    const auto id = corpus.vocab.find(n);
    if (!id) {
      s.unknown.push_back(n);
      continue;
    }
    if (seen.insert(*id).second) s.ids.push_back(*id);
  }
  return s;
}

void report_unknown(const std::vector<std::string>& unknown) {
  for (const auto& u : unknown) std::fprintf(stderr, "warning: term '%s' is not in the vocabulary\n", u.c_str());
}

// ---------------------------------------------------------------- cooc

struct CoocArgs {
  std::string corpus;
  std::string measure = "dice";
  std::uint32_t min_cooc_count = 1;
  std::vector<std::string> terms;
  bool keep_stopwords = false;
  bool counts = false;
  bool global = false;
};

std::string slice_file(const TimeSlice& s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "slice_%05zu_", s.index);
  return buf + s.label + ".tsv";
}

int cmd_cooc(const CoocArgs& a, const Common& c) {
  const auto measure = parse_measure(a.measure);
  const auto corpus = load_corpus(a.corpus);
  const auto sel = select_terms(corpus, a.terms, 0);
  report_unknown(sel.unknown);
  if (!a.terms.empty() && sel.ids.empty()) throw DataError("none of the requested terms is in the vocabulary");

  CoocOptions opt;
  opt.skip_stopwords = !a.keep_stopwords;
  opt.min_cooc_count = a.min_cooc_count;
  if (!a.terms.empty()) opt.focus = sel.ids;
  const unsigned threads = resolved_threads(c);
  const auto out = prepare_out(c.out);
  const auto counts = count_all_slices(corpus, opt, threads);

  json files = json::array();
  for (std::size_t t = 0; t < counts.size(); ++t) {
    const auto& slice = corpus.slices[t];
    const auto name = slice_file(slice);
    auto f = open_out(out / name);
    if (a.counts)
      write_pair_tsv(f, counts[t].counts, corpus.vocab);
    else
      write_pair_tsv(f, significance(counts[t], measure).sig, corpus.vocab);
    files.push_back(name);
  }
  if (a.global) {
    auto f = open_out(out / "global.tsv");
    if (a.counts)
      write_pair_tsv(f, pool_counts(counts).counts, corpus.vocab);
    else
      write_pair_tsv(f, global_significance(counts, measure).sig, corpus.vocab);
    files.push_back("global.tsv");
  }

  write_manifest(out, "cooc",
                 {{"corpus", a.corpus},
                  {"measure", std::string(to_string(measure))},
                  {"min_cooc_count", a.min_cooc_count},
                  {"terms", a.terms},
                  {"skip_stopwords", opt.skip_stopwords},
                  {"values", a.counts ? "counts" : "significance"},
                  {"global", a.global},
                  {"threads", threads}},
                 {{"slices", files}, {"unknown_terms", sel.unknown}});
  return 0;
}

// ---------------------------------------------------------------- volatility

struct VolatilityArgs {
  std::string corpus;
  std::vector<std::string> estimators{"minmax"};
  std::string measure = "dice";
  std::uint32_t history = 3;
  std::uint32_t min_cooc_count = 1;
  std::uint64_t min_term_freq = 0;
  std::vector<std::string> terms;
  bool keep_stopwords = false;
};

int cmd_volatility(const VolatilityArgs& a, const Common& c) {
  const auto measure = parse_measure(a.measure);
  const auto estimators = resolve_estimators(a.estimators);
  const auto corpus = load_corpus(a.corpus);
  if (a.history < 2 || a.history > corpus.slices.size())
    throw ConfigError("--history " + std::to_string(a.history) + " needs between 2 and " +
                      std::to_string(corpus.slices.size()) + " slices");
  const auto sel = select_terms(corpus, a.terms, a.min_term_freq);
  report_unknown(sel.unknown);
  if (sel.ids.empty()) throw DataError("no terms to score");

  CoocOptions opt;
  opt.skip_stopwords = !a.keep_stopwords;
  opt.min_cooc_count = a.min_cooc_count;
  if (!a.terms.empty()) opt.focus = sel.ids;
  const bool with_global = std::any_of(estimators.begin(), estimators.end(), uses_global_statistic);
  const unsigned threads = resolved_threads(c);

  const auto stats = CorpusStatistics::compute(corpus, measure, opt, with_global, threads);
  const auto series = volatility_series(stats, sel.ids, estimators, a.history, threads);

  const auto out = prepare_out(c.out);
  {
    auto f = open_out(out / "series.csv");
    write_series_csv(f, series, corpus);
  }
  {
    auto f = open_out(out / "frequency.csv");
    write_frequency_csv(f, sel.ids, corpus);
  }
  write_manifest(out, "volatility",
                 {{"corpus", a.corpus},
                  {"estimators", estimator_names(estimators)},
                  {"measure", std::string(to_string(measure))},
                  {"history", a.history},
                  {"min_cooc_count", a.min_cooc_count},
                  {"min_term_freq", a.min_term_freq},
                  {"terms", a.terms},
                  {"skip_stopwords", opt.skip_stopwords},
                  {"threads", threads}},
                 {{"series", "series.csv"},
                  {"frequency", "frequency.csv"},
                  {"terms_scored", sel.ids.size()},
                  {"unknown_terms", sel.unknown}});
  return 0;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string preset = "A";
  std::uint64_t seed = 1;
  SynthSpec base;
  std::size_t boost_factor = 0;  // 1-based, 0 = none
  std::uint32_t boost_multiplier = 5;
};

json spec_json(const SynthSpec& s) {
  json cases = json::array();
  for (auto c : s.case_mix) cases.push_back(std::string(to_string(c)));
  json targets = json::array();
  for (auto t : s.target_functions) targets.push_back(std::string(to_string(t)));
  return {{"seed", s.seed},
          {"n_slices", s.n_slices},
          {"vocab_size", s.vocab_size},
          {"mean_docs_per_slice", s.mean_docs_per_slice},
          {"mean_tokens_per_doc", s.mean_tokens_per_doc},
          {"n_stopwords", s.n_stopwords},
          {"n_context_words_per_factor", s.n_context_words_per_factor},
          {"context_mean", s.context_mean},
          {"context_sd", s.context_sd},
          {"reference_value", s.reference_value},
          {"background_value", s.background_value},
          {"zipf_numerator", s.zipf_numerator},
          {"zipf_enabled", s.zipf_enabled},
          {"case_mix", cases},
          {"peak_changes_per_slice", s.peak_changes_per_slice},
          {"target_functions", targets},
          {"factor_weights", s.factor_weights}};
}

int cmd_synth(const SynthArgs& a, const Common& c) {
  auto spec = preset(a.preset.at(0), a.base);
  spec.seed = a.seed;
  if (a.boost_factor != 0) {
    if (a.boost_factor > kFactorCount) throw ConfigError("--boost-factor must be between 1 and 7");
    spec = boost_factor(spec, a.boost_factor - 1, a.boost_multiplier);
  }
  spec.validate();
  const unsigned threads = resolved_threads(c);
  const auto ds = generate_dataset(spec, threads);

  const auto out = prepare_out(c.out);
  {
    auto f = open_out(out / "corpus.jsonl");
    write_jsonl(f, to_raw_documents(ds));
  }
  {
    auto f = open_out(out / "ground_truth.csv");
    write_ground_truth_csv(f, ds);
  }
  {
    auto f = open_out(out / "stopwords.txt");
    write_stopwords(f, spec);
  }
  json refs = json::array();
  for (const auto& t : ds.traces) refs.push_back({{"factor", t.factor + 1}, {"term", t.reference_term},
                                                  {"target_function", std::string(to_string(t.target))}});
  write_manifest(out, "synth",
                 {{"preset", a.preset}, {"boost_factor", a.boost_factor}, {"boost_multiplier", a.boost_multiplier},
                  {"spec", spec_json(spec)}, {"threads", threads}},
                 {{"corpus", "corpus.jsonl"},
                  {"ground_truth", "ground_truth.csv"},
                  {"stopwords", "stopwords.txt"},
                  {"documents", ds.corpus.document_count()},
                  {"documents_per_factor", ds.documents_per_factor},
                  {"skipped_changes", ds.skipped_changes},
                  {"reference_words", refs}});
  return 0;
}

// ---------------------------------------------------------------- benchmark

struct BenchmarkArgs {
  std::vector<std::uint64_t> seeds;
  std::uint32_t n_seeds = 5;
  std::string datasets = "ABC";
  std::vector<std::string> estimators{"all"};
  std::string measure = "dice";
  std::uint32_t history = 2;
  std::uint32_t min_cooc_count = 1;
  SynthSpec base;
  bool boost = false;
  std::size_t boost_factor = 1;  // 1-based
  std::uint32_t boost_multiplier = 5;
  char boost_dataset = 'A';
};

int cmd_benchmark(const BenchmarkArgs& a, const Common& c) {
  BenchmarkConfig cfg;
  cfg.base = a.base;
  cfg.datasets.assign(a.datasets.begin(), a.datasets.end());
  for (char d : cfg.datasets)
    if (d != 'A' && d != 'B' && d != 'C') throw ConfigError(std::string("unknown dataset '") + d + "'");
  cfg.estimators = resolve_estimators(a.estimators);
  cfg.h = a.history;
  cfg.measure = parse_measure(a.measure);
  cfg.cooc.min_cooc_count = a.min_cooc_count;
  cfg.seeds = a.seeds;
  if (cfg.seeds.empty())
    for (std::uint64_t s = 1; s <= a.n_seeds; ++s) cfg.seeds.push_back(s);
  cfg.threads = resolved_threads(c);
  if (a.boost && (a.boost_factor < 1 || a.boost_factor > kFactorCount))
    throw ConfigError("--boost-factor must be between 1 and 7");

  const auto out = prepare_out(c.out);
  const auto result = run_benchmark(cfg);
  {
    auto f = open_out(out / "word_scores.csv");
    write_word_scores_csv(f, result.words);
  }
  {
    auto f = open_out(out / "summary.csv");
    write_summary_csv(f, result);
  }
  json outputs{{"word_scores", "word_scores.csv"}, {"summary", "summary.csv"}};
  if (a.boost) {
    BoostConfig bc;
    bc.benchmark = cfg;
    bc.dataset = a.boost_dataset;
    bc.factor = a.boost_factor - 1;
    bc.multiplier = a.boost_multiplier;
    const auto rows = run_boost_benchmark(bc);
    auto f = open_out(out / "boost.csv");
    write_boost_csv(f, rows);
    outputs["boost"] = "boost.csv";
  }

  json summary = json::array();
  for (const auto& row : result.summary) {
    json cells = json::object();
    for (std::size_t d = 0; d < cfg.datasets.size(); ++d)
      cells[std::string(1, cfg.datasets[d])] = row.per_dataset[d].mean;
    cells["mean"] = row.grand_mean.mean;
    summary.push_back({{"estimator", std::string(to_string(row.estimator))}, {"scores", cells}});
  }
  outputs["summary_means"] = summary;
  write_manifest(out, "benchmark",
                 {{"seeds", cfg.seeds},
                  {"datasets", a.datasets},
                  {"estimators", estimator_names(cfg.estimators)},
                  {"measure", std::string(to_string(cfg.measure))},
                  {"history", cfg.h},
                  {"min_cooc_count", a.min_cooc_count},
                  {"base_spec", spec_json(cfg.base)},
                  {"boost", a.boost},
                  {"boost_dataset", std::string(1, a.boost_dataset)},
                  {"boost_factor", a.boost_factor},
                  {"boost_multiplier", a.boost_multiplier},
                  {"threads", cfg.threads}},
                 outputs);
  return 0;
}

void add_scale_options(CLI::App* sub, SynthSpec& s) {
  sub->add_option("--slices", s.n_slices, "Number of time slices")->capture_default_str();
  sub->add_option("--docs", s.mean_docs_per_slice, "Mean documents per slice")->capture_default_str();
  sub->add_option("--tokens", s.mean_tokens_per_doc, "Mean tokens per document")->capture_default_str();
  sub->add_option("--vocab", s.vocab_size, "Vocabulary size")->capture_default_str();
  sub->add_option("--peak-changes", s.peak_changes_per_slice, "Changes per slice at the target peak")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context volatility of words in diachronic corpora"};
  app.set_version_flag("--version", VOLATEXT_VERSION);
  app.require_subcommand(1);

  const std::vector<std::string> measures{"dice", "llr", "mi"};
  const std::vector<std::string> estimator_choices{"all", "baseline", "global_baseline", "sig", "global_sig",
                                                   "minmax"};

  Common common;

  IngestArgs ingest;
  auto* ing = app.add_subcommand("ingest", "Tokenize and slice a JSONL corpus");
  ing->add_option("--input", ingest.input, "JSONL file with id, date and text fields")
      ->required()
      ->check(CLI::ExistingFile);
  ing->add_option("--granularity", ingest.granularity, "Slice width")
      ->check(CLI::IsMember({"year", "month", "week", "day", "hour", "minute"}))
      ->capture_default_str();
  ing->add_option("--min-term-freq", ingest.min_term_freq, "Drop terms seen fewer times")->capture_default_str();
  ing->add_option("--stopwords", ingest.stopwords, "Stopword list, one per line")->check(CLI::ExistingFile);
  ing->add_flag("--remove-stopwords", ingest.remove_stopwords, "Drop stopwords instead of flagging them");
  ing->add_flag("--keep-case", ingest.keep_case, "Do not lowercase tokens");
  ing->add_option("--sentence-terminators", ingest.terminators, "Characters that end a sentence")
      ->capture_default_str();
  add_common(ing, common);

  CoocArgs cooc;
  auto* co = app.add_subcommand("cooc", "Write per-slice co-occurrence tables");
  co->add_option("--corpus", cooc.corpus, "Corpus file from ingest")->required()->check(CLI::ExistingFile);
  co->add_option("--measure", cooc.measure, "Significance measure")
      ->check(CLI::IsMember(measures))
      ->capture_default_str();
  co->add_option("--min-cooc-count", cooc.min_cooc_count, "Drop pairs seen in fewer sentences")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  co->add_option("--terms", cooc.terms, "Only rows of these terms")->delimiter(',');
  co->add_flag("--keep-stopwords", cooc.keep_stopwords, "Include stopwords in pairs");
  co->add_flag("--counts", cooc.counts, "Write raw sentence counts instead of significances");
  co->add_flag("--global", cooc.global, "Also write the statistic pooled over all slices");
  add_common(co, common);

  VolatilityArgs vol;
  auto* vo = app.add_subcommand("volatility", "Score context volatility per term and slice");
  vo->add_option("--corpus", vol.corpus, "Corpus file from ingest")->required()->check(CLI::ExistingFile);
  vo->add_option("--estimator", vol.estimators, "Estimators, comma separated, or 'all'")
      ->delimiter(',')
      ->check(CLI::IsMember(estimator_choices))
      ->capture_default_str();
  vo->add_option("--measure", vol.measure, "Significance measure")
      ->check(CLI::IsMember(measures))
      ->capture_default_str();
  vo->add_option("--history", vol.history, "Window length h in slices")->capture_default_str();
  vo->add_option("--min-cooc-count", vol.min_cooc_count, "Drop pairs seen in fewer sentences")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  vo->add_option("--min-term-freq", vol.min_term_freq, "Without --terms, score terms at least this frequent")
      ->capture_default_str();
  vo->add_option("--terms", vol.terms, "Terms to score, comma separated")->delimiter(',');
  vo->add_flag("--keep-stopwords", vol.keep_stopwords, "Include stopwords in contexts");
  add_common(vo, common);

  SynthArgs synth;
  auto* sy = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  sy->add_option("--preset", synth.preset, "Dataset preset")
      ->check(CLI::IsMember({"A", "B", "C"}))
      ->capture_default_str();
  sy->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  add_scale_options(sy, synth.base);
  sy->add_option("--boost-factor", synth.boost_factor, "Factor (1-7) drawn more often");
  sy->add_option("--boost-multiplier", synth.boost_multiplier, "Weight of the boosted factor")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(sy, common);

  BenchmarkArgs bench;
  auto* be = app.add_subcommand("benchmark", "Score estimators against synthetic ground truth");
  auto* seed_list = be->add_option("--seed", bench.seeds, "Explicit seeds, comma separated")->delimiter(',');
  be->add_option("--seeds", bench.n_seeds, "Run seeds 1..N")->excludes(seed_list)->capture_default_str();
  be->add_option("--datasets", bench.datasets, "Presets to include")->capture_default_str();
  be->add_option("--estimator", bench.estimators, "Estimators, comma separated, or 'all'")
      ->delimiter(',')
      ->check(CLI::IsMember(estimator_choices))
      ->capture_default_str();
  be->add_option("--measure", bench.measure, "Significance measure")
      ->check(CLI::IsMember(measures))
      ->capture_default_str();
  be->add_option("--history", bench.history, "Window length h in slices")->capture_default_str();
  be->add_option("--min-cooc-count", bench.min_cooc_count, "Drop pairs seen in fewer sentences")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_scale_options(be, bench.base);
  be->add_flag("--boost", bench.boost, "Also run the boosted-factor experiment");
  be->add_option("--boost-factor", bench.boost_factor, "Factor (1-7) to boost")->capture_default_str();
  be->add_option("--boost-multiplier", bench.boost_multiplier, "Weight of the boosted factor")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  be->add_option("--boost-dataset", bench.boost_dataset, "Preset for the boost run")
      ->check(CLI::IsMember({"A", "B", "C"}))
      ->capture_default_str();
  add_common(be, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*ing) return cmd_ingest(ingest, common);
    if (*co) return cmd_cooc(cooc, common);
    if (*vo) return cmd_volatility(vol, common);
    if (*sy) return cmd_synth(synth, common);
    if (*be) return cmd_benchmark(bench, common);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}
