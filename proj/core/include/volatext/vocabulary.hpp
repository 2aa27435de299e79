#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "volatext/types.hpp"

namespace volatext {

/// Bidirectional term <-> id map. Ids are dense and assigned in lexicographic
/// (byte-wise) order of the term strings, so comparing ids is the same as
/// comparing terms. Every term has corpus frequency >= 1.
class Vocabulary {
 public:
  struct Entry {
    std::string term;
    std::uint64_t frequency = 0;
    bool stopword = false;
  };

  Vocabulary() = default;

  /// Sorts the entries by term and assigns ids. Throws std::invalid_argument
  /// on duplicate terms or zero frequencies.
  static Vocabulary from_entries(std::vector<Entry> entries);

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  const std::string& term(TermId id) const { return terms_.at(id); }
  std::span<const std::string> terms() const { return terms_; }
  std::optional<TermId> find(std::string_view term) const;

  std::uint64_t frequency(TermId id) const { return frequency_.at(id); }
  bool is_stopword(TermId id) const { return stopword_.at(id) != 0; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.frequency_ == b.frequency_ && a.stopword_ == b.stopword_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint64_t> frequency_;
  std::vector<std::uint8_t> stopword_;
  std::unordered_map<std::string, TermId> index_;
};

}  // namespace volatext
