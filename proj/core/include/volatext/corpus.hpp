#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "volatext/calendar.hpp"
#include "volatext/tokenizer.hpp"
#include "volatext/types.hpp"
#include "volatext/vocabulary.hpp"

namespace volatext {

/// One input document before validation. `date` is kept as text so that bad
/// timestamps can be reported per document instead of failing the batch.
struct RawDocument {
  std::string id;
  std::string date;
  std::string text;
};

using Sentence = std::vector<TermId>;
using Document = std::vector<Sentence>;

struct TimeSlice {
  std::size_t index = 0;
  std::int64_t bucket = 0;
  std::string label;
  std::vector<std::string> document_ids;
  std::vector<Document> documents;

  std::size_t sentence_count() const;
  friend bool operator==(const TimeSlice&, const TimeSlice&) = default;
};

/// Documents bucketed into contiguous calendar slices. Empty buckets between
/// the first and last document are kept so slice indices are contiguous in
/// time. Immutable once built.
struct SlicedCorpus {
  Granularity granularity = Granularity::week;
  Vocabulary vocab;
  std::vector<TimeSlice> slices;

  std::size_t document_count() const;
  /// Per-slice token counts of one term.
  std::vector<std::uint64_t> term_frequencies(TermId term) const;
  friend bool operator==(const SlicedCorpus&, const SlicedCorpus&) = default;
};

struct Rejection {
  std::size_t line = 0;  // 1-based input line, 0 when not from a file
  std::string id;
  std::string reason;
};

struct IngestReport {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t slices = 0;
  std::vector<Rejection> rejections;
};

struct CorpusBuildOptions {
  Granularity granularity = Granularity::week;
  TokenizerConfig tokenizer;
  std::uint64_t min_term_freq = 2;
  unsigned threads = 0;
};

struct CorpusBuildResult {
  SlicedCorpus corpus;
  IngestReport report;
};

/// Validates, tokenizes and slices the documents. Documents with an
/// unparseable date or blank text are rejected and listed in the report;
/// if nothing is accepted a DataError is thrown. Output is ordered by
/// (date, id) and independent of `threads`.
CorpusBuildResult build_sliced_corpus(std::vector<RawDocument> docs,
                                      const CorpusBuildOptions& options);

/// Low-level builder shared by ingestion and the synthetic generator.
/// Documents are added with provisional term ids from intern(); finish()
/// drops terms below the frequency cutoff, assigns lexicographic ids and
/// buckets the documents.
class CorpusAssembler {
 public:
  explicit CorpusAssembler(Granularity granularity) : granularity_(granularity) {}

  std::uint32_t intern(std::string_view term);
  void mark_stopword(std::uint32_t provisional_id);
  void add_document(std::string id, Date date, std::vector<std::vector<std::uint32_t>> sentences);
  std::size_t document_count() const { return docs_.size(); }
  /// Extends the slice range to cover [first, last] even if no document
  /// falls on those dates.
  void ensure_range(Date first, Date last);

  SlicedCorpus finish(std::uint64_t min_term_freq) &&;

 private:
  struct PendingDoc {
    std::string id;
    Date date;
    std::vector<std::vector<std::uint32_t>> sentences;
  };
  Granularity granularity_;
  std::vector<std::string> names_;
  std::vector<std::uint8_t> stopword_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<PendingDoc> docs_;
  std::optional<std::pair<Date, Date>> range_;
};

}  // namespace volatext
