#include "volatext/corpus_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "json.hpp"

namespace volatext {
namespace {

using nlohmann::json;

constexpr std::array<char, 8> kMagic{'V', 'T', 'X', 'C', 'O', 'R', 'P', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "corpus container I/O assumes a little-endian host");

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  template <typename T>
  void pod(T value) {
    out_.write(reinterpret_cast<const char*>(&value), sizeof value);
  }
  void str(const std::string& s) {
    pod(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  template <typename T>
  T pod() {
    T value{};
    in_.read(reinterpret_cast<char*>(&value), sizeof value);
    if (!in_) throw DataError("corpus file truncated");
    return value;
  }
  std::string str() {
    const auto n = pod<std::uint32_t>();
    std::string s(n, '\0');
    in_.read(s.data(), n);
    if (!in_) throw DataError("corpus file truncated");
    return s;
  }

 private:
  std::istream& in_;
};

}  // namespace

JsonlReadResult read_jsonl(std::istream& in) {
  JsonlReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      result.rejections.push_back({line_no, "", "malformed JSON"});
      continue;
    }
    std::string id = obj.contains("id") && obj["id"].is_string() ? obj["id"].get<std::string>() : "";
    bool ok = true;
    for (const char* field : {"id", "date", "text"}) {
      if (!obj.contains(field) || !obj[field].is_string()) {
        result.rejections.push_back({line_no, id, std::string("missing or non-string field '") + field + "'"});
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    result.documents.push_back(
        {std::move(id), obj["date"].get<std::string>(), obj["text"].get<std::string>()});
  }
  return result;
}

void write_jsonl(std::ostream& out, std::span<const RawDocument> docs) {
  for (const auto& doc : docs) {
    json obj = {{"id", doc.id}, {"date", doc.date}, {"text", doc.text}};
    out << obj.dump() << '\n';
  }
}

CorpusBuildResult ingest_jsonl(std::istream& in, const CorpusBuildOptions& options) {
  auto parsed = read_jsonl(in);
  if (parsed.documents.empty())
    throw DataError(parsed.rejections.empty()
                        ? "input contains no documents"
                        : "no parseable documents (" + std::to_string(parsed.rejections.size()) +
                              " malformed lines)");
  auto result = build_sliced_corpus(std::move(parsed.documents), options);
  auto& report = result.report;
  report.rejections.insert(report.rejections.begin(), parsed.rejections.begin(), parsed.rejections.end());
  report.rejected = report.rejections.size();
  return result;
}

std::string ingest_report_json(const IngestReport& report) {
  json rejections = json::array();
  for (const auto& r : report.rejections) {
    json item = {{"id", r.id}, {"reason", r.reason}};
    if (r.line != 0) item["line"] = r.line;
    rejections.push_back(std::move(item));
  }
  json obj = {{"accepted", report.accepted},
              {"rejected", report.rejected},
              {"slices", report.slices},
              {"rejections", std::move(rejections)}};
  return obj.dump(2);
}

void write_corpus(std::ostream& out, const SlicedCorpus& corpus) {
  Writer w(out);
  out.write(kMagic.data(), kMagic.size());
  w.pod(kFormatVersion);
  w.pod(static_cast<std::uint8_t>(corpus.granularity));
  w.pod(static_cast<std::uint64_t>(corpus.vocab.size()));
  for (TermId id = 0; id < corpus.vocab.size(); ++id) {
    w.str(corpus.vocab.term(id));
    w.pod(corpus.vocab.frequency(id));
    w.pod(static_cast<std::uint8_t>(corpus.vocab.is_stopword(id)));
  }
  w.pod(static_cast<std::uint64_t>(corpus.slices.size()));
  for (const auto& slice : corpus.slices) {
    w.pod(slice.bucket);
    w.str(slice.label);
    w.pod(static_cast<std::uint64_t>(slice.documents.size()));
    for (std::size_t d = 0; d < slice.documents.size(); ++d) {
      w.str(slice.document_ids[d]);
      const auto& doc = slice.documents[d];
      w.pod(static_cast<std::uint32_t>(doc.size()));
      for (const auto& sentence : doc) {
        w.pod(static_cast<std::uint32_t>(sentence.size()));
        out.write(reinterpret_cast<const char*>(sentence.data()),
                  static_cast<std::streamsize>(sentence.size() * sizeof(TermId)));
      }
    }
  }
  if (!out) throw DataError("failed to write corpus");
}

SlicedCorpus read_corpus(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw DataError("not a volatext corpus file");
  Reader r(in);
  const auto version = r.pod<std::uint32_t>();
  if (version != kFormatVersion)
    throw DataError("unsupported corpus format version " + std::to_string(version));

  SlicedCorpus corpus;
  const auto granularity = r.pod<std::uint8_t>();
  if (granularity > static_cast<std::uint8_t>(Granularity::minute)) throw DataError("bad granularity tag");
  corpus.granularity = static_cast<Granularity>(granularity);

  const auto vocab_size = r.pod<std::uint64_t>();
  std::vector<Vocabulary::Entry> entries;
  entries.reserve(vocab_size);
  for (std::uint64_t i = 0; i < vocab_size; ++i) {
    Vocabulary::Entry e;
    e.term = r.str();
    e.frequency = r.pod<std::uint64_t>();
    e.stopword = r.pod<std::uint8_t>() != 0;
    entries.push_back(std::move(e));
  }
  corpus.vocab = Vocabulary::from_entries(std::move(entries));

  const auto n_slices = r.pod<std::uint64_t>();
  corpus.slices.resize(n_slices);
  for (std::uint64_t s = 0; s < n_slices; ++s) {
    auto& slice = corpus.slices[s];
    slice.index = s;
    slice.bucket = r.pod<std::int64_t>();
    slice.label = r.str();
    const auto n_docs = r.pod<std::uint64_t>();
    slice.document_ids.reserve(n_docs);
    slice.documents.reserve(n_docs);
    for (std::uint64_t d = 0; d < n_docs; ++d) {
      slice.document_ids.push_back(r.str());
      Document doc(r.pod<std::uint32_t>());
      for (auto& sentence : doc) {
        sentence.resize(r.pod<std::uint32_t>());
        in.read(reinterpret_cast<char*>(sentence.data()),
                static_cast<std::streamsize>(sentence.size() * sizeof(TermId)));
        if (!in) throw DataError("corpus file truncated");
        for (auto t : sentence)
          if (t >= vocab_size) throw DataError("corpus file references unknown term id");
      }
      slice.documents.push_back(std::move(doc));
    }
  }
  return corpus;
}

void save_corpus(const std::filesystem::path& path, const SlicedCorpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  write_corpus(out, corpus);
}

SlicedCorpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus '" + path.string() + "'");
  return read_corpus(in);
}

}  // namespace volatext
