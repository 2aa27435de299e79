#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "volatext/corpus.hpp"

namespace volatext {

struct JsonlReadResult {
  std::vector<RawDocument> documents;
  std::vector<Rejection> rejections;
};

/// Reads JSON Lines with string fields `id`, `date` (YYYY-MM-DD) and `text`.
/// Lines that are not valid JSON objects with those fields are rejected with
/// their line number; blank lines are skipped. Date validity is checked later
/// by build_sliced_corpus.
JsonlReadResult read_jsonl(std::istream& in);
void write_jsonl(std::ostream& out, std::span<const RawDocument> docs);

/// read_jsonl + build_sliced_corpus, with parse rejections merged into the
/// report. Throws DataError when no document survives.
CorpusBuildResult ingest_jsonl(std::istream& in, const CorpusBuildOptions& options);

/// `{"accepted":N,"rejected":N,"slices":N,"rejections":[...]}`
std::string ingest_report_json(const IngestReport& report);

/// Versioned little-endian binary container; layout documented in
/// docs/corpus_format.md.
void write_corpus(std::ostream& out, const SlicedCorpus& corpus);
SlicedCorpus read_corpus(std::istream& in);

void save_corpus(const std::filesystem::path& path, const SlicedCorpus& corpus);
SlicedCorpus load_corpus(const std::filesystem::path& path);

}  // namespace volatext
