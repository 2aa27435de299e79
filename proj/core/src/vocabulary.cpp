#include "volatext/vocabulary.hpp"

#include <algorithm>
#include <stdexcept>

namespace volatext {

Vocabulary Vocabulary::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.term < b.term; });
  Vocabulary vocab;
  vocab.terms_.reserve(entries.size());
  vocab.frequency_.reserve(entries.size());
  vocab.stopword_.reserve(entries.size());
  vocab.index_.reserve(entries.size());
  for (auto& e : entries) {
    if (e.frequency == 0) throw std::invalid_argument("vocabulary term '" + e.term + "' has zero frequency");
    const auto id = static_cast<TermId>(vocab.terms_.size());
    if (!vocab.index_.emplace(e.term, id).second)
      throw std::invalid_argument("duplicate vocabulary term '" + e.term + "'");
    vocab.terms_.push_back(std::move(e.term));
    vocab.frequency_.push_back(e.frequency);
    vocab.stopword_.push_back(e.stopword ? 1 : 0);
  }
  return vocab;
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace volatext
