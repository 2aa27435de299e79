#include "volatext/corpus.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <utility>

#include "volatext/parallel.hpp"

namespace volatext {

std::size_t TimeSlice::sentence_count() const {
  std::size_t n = 0;
  for (const auto& doc : documents) n += doc.size();
  return n;
}

std::size_t SlicedCorpus::document_count() const {
  std::size_t n = 0;
  for (const auto& s : slices) n += s.documents.size();
  return n;
}

std::vector<std::uint64_t> SlicedCorpus::term_frequencies(TermId term) const {
  std::vector<std::uint64_t> out(slices.size(), 0);
  for (std::size_t i = 0; i < slices.size(); ++i)
    for (const auto& doc : slices[i].documents)
      for (const auto& sentence : doc)
        out[i] += static_cast<std::uint64_t>(std::count(sentence.begin(), sentence.end(), term));
  return out;
}

std::uint32_t CorpusAssembler::intern(std::string_view term) {
  auto [it, inserted] = index_.try_emplace(std::string(term), static_cast<std::uint32_t>(names_.size()));
  if (inserted) {
    names_.emplace_back(term);
    stopword_.push_back(0);
  }
  return it->second;
}

void CorpusAssembler::mark_stopword(std::uint32_t provisional_id) { stopword_.at(provisional_id) = 1; }

void CorpusAssembler::add_document(std::string id, Date date,
                                   std::vector<std::vector<std::uint32_t>> sentences) {
  docs_.push_back({std::move(id), date, std::move(sentences)});
}

void CorpusAssembler::ensure_range(Date first, Date last) { range_ = std::pair(first, last); }

SlicedCorpus CorpusAssembler::finish(std::uint64_t min_term_freq) && {
  if (docs_.empty()) throw DataError("corpus has no documents");

  std::vector<std::uint64_t> freq(names_.size(), 0);
  for (const auto& doc : docs_)
    for (const auto& sentence : doc.sentences)
      for (auto t : sentence) ++freq.at(t);

  std::vector<Vocabulary::Entry> entries;
  for (std::uint32_t p = 0; p < names_.size(); ++p)
    if (freq[p] >= min_term_freq && freq[p] > 0) entries.push_back({names_[p], freq[p], stopword_[p] != 0});

  SlicedCorpus corpus;
  corpus.granularity = granularity_;
  corpus.vocab = Vocabulary::from_entries(std::move(entries));

  constexpr auto kDropped = std::numeric_limits<TermId>::max();
  std::vector<TermId> remap(names_.size(), kDropped);
  for (std::uint32_t p = 0; p < names_.size(); ++p)
    if (auto id = corpus.vocab.find(names_[p])) remap[p] = *id;

  std::stable_sort(docs_.begin(), docs_.end(), [](const PendingDoc& a, const PendingDoc& b) {
    return std::tie(a.date, a.id) < std::tie(b.date, b.id);
  });

  auto first_key = bucket_key(docs_.front().date, granularity_);
  auto last_key = bucket_key(docs_.back().date, granularity_);
  if (range_) {
    first_key = std::min(first_key, bucket_key(range_->first, granularity_));
    last_key = std::max(last_key, bucket_key(range_->second, granularity_));
  }
  corpus.slices.resize(static_cast<std::size_t>(last_key - first_key + 1));
  for (std::size_t i = 0; i < corpus.slices.size(); ++i) {
    auto& slice = corpus.slices[i];
    slice.index = i;
    slice.bucket = first_key + static_cast<std::int64_t>(i);
    slice.label = bucket_label(slice.bucket, granularity_);
  }

  for (auto& doc : docs_) {
    Document mapped;
    mapped.reserve(doc.sentences.size());
    for (const auto& sentence : doc.sentences) {
      Sentence out;
      out.reserve(sentence.size());
      for (auto t : sentence)
        if (remap[t] != kDropped) out.push_back(remap[t]);
      if (!out.empty()) mapped.push_back(std::move(out));
    }
    doc.sentences.clear();
    doc.sentences.shrink_to_fit();
    auto& slice = corpus.slices[static_cast<std::size_t>(bucket_key(doc.date, granularity_) - first_key)];
    slice.document_ids.push_back(std::move(doc.id));
    slice.documents.push_back(std::move(mapped));
  }
  docs_.clear();
  return corpus;
}

namespace {

bool blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  });
}

}  // namespace

CorpusBuildResult build_sliced_corpus(std::vector<RawDocument> docs,
                                      const CorpusBuildOptions& options) {
  if (options.min_term_freq < 1) throw ConfigError("min_term_freq must be >= 1");
  CorpusBuildResult result;
  auto& report = result.report;

  struct Accepted {
    RawDocument* doc;
    Date date;
  };
  std::vector<Accepted> accepted;
  accepted.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    auto& doc = docs[i];
    const auto date = parse_date(doc.date);
    if (!date) {
      report.rejections.push_back({0, doc.id, "unparseable date '" + doc.date + "'"});
    } else if (blank(doc.text)) {
      report.rejections.push_back({0, doc.id, "empty text"});
    } else {
      accepted.push_back({&doc, *date});
    }
  }
  report.accepted = accepted.size();
  report.rejected = report.rejections.size();
  if (accepted.empty()) throw DataError("no documents accepted (" + std::to_string(report.rejected) + " rejected)");

  std::sort(accepted.begin(), accepted.end(), [](const Accepted& a, const Accepted& b) {
    return std::tie(a.date, a.doc->id) < std::tie(b.date, b.doc->id);
  });

  // Tokenize in bounded chunks so only one chunk of string tokens is alive.
  CorpusAssembler assembler(options.granularity);
  constexpr std::size_t kChunk = 512;
  std::vector<std::vector<TokenSentence>> tokenized;
  for (std::size_t begin = 0; begin < accepted.size(); begin += kChunk) {
    const std::size_t end = std::min(accepted.size(), begin + kChunk);
    tokenized.assign(end - begin, {});
    parallel_for(end - begin, options.threads, [&](std::size_t i) {
      tokenized[i] = tokenize(accepted[begin + i].doc->text, options.tokenizer);
    });
    for (std::size_t i = 0; i < tokenized.size(); ++i) {
      std::vector<std::vector<std::uint32_t>> sentences;
      sentences.reserve(tokenized[i].size());
      for (const auto& sentence : tokenized[i]) {
        std::vector<std::uint32_t> ids;
        ids.reserve(sentence.size());
        for (const auto& token : sentence) {
          const auto id = assembler.intern(token);
          if (options.tokenizer.is_stopword(token)) assembler.mark_stopword(id);
          ids.push_back(id);
        }
        sentences.push_back(std::move(ids));
      }
      auto& doc = *accepted[begin + i].doc;
      assembler.add_document(std::move(doc.id), accepted[begin + i].date, std::move(sentences));
      doc.text.clear();
      doc.text.shrink_to_fit();
    }
  }

  result.corpus = std::move(assembler).finish(options.min_term_freq);
  report.slices = result.corpus.slices.size();
  return result;
}

}  // namespace volatext
