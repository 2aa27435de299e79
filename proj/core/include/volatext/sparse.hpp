#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "volatext/types.hpp"

namespace volatext {

/// Sparse symmetric term-term matrix in compressed-row form. Every stored
/// pair (a, b), a != b, appears in both row a and row b; rows are sorted by
/// neighbour id. An absent entry means "no co-occurrence" (a gap), never an
/// explicit zero. Immutable after construction.
template <typename T>
class SymmetricMatrix {
 public:
  struct Entry {
    TermId neighbor;
    T value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  struct Triple {
    TermId a;
    TermId b;
    T value;
  };

  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n_terms) : offsets_(n_terms + 1, 0) {}

  /// Builds from unique unordered pairs. Each pair must satisfy a < b < n_terms
  /// and appear once.
  static SymmetricMatrix from_pairs(std::size_t n_terms, std::span<const Triple> pairs) {
    SymmetricMatrix m(n_terms);
    for (const auto& p : pairs) {
      if (!(p.a < p.b) || p.b >= n_terms) throw std::invalid_argument("SymmetricMatrix: bad pair");
      ++m.offsets_[p.a + 1];
      ++m.offsets_[p.b + 1];
    }
    for (std::size_t i = 0; i < n_terms; ++i) m.offsets_[i + 1] += m.offsets_[i];
    m.entries_.resize(m.offsets_[n_terms]);
    std::vector<std::size_t> cursor(m.offsets_.begin(), m.offsets_.end() - 1);
    for (const auto& p : pairs) {
      m.entries_[cursor[p.a]++] = {p.b, p.value};
      m.entries_[cursor[p.b]++] = {p.a, p.value};
    }
    for (std::size_t i = 0; i < n_terms; ++i) {
      auto first = m.entries_.begin() + static_cast<std::ptrdiff_t>(m.offsets_[i]);
      auto last = m.entries_.begin() + static_cast<std::ptrdiff_t>(m.offsets_[i + 1]);
      std::sort(first, last, [](const Entry& x, const Entry& y) { return x.neighbor < y.neighbor; });
      if (std::adjacent_find(first, last, [](const Entry& x, const Entry& y) {
            return x.neighbor == y.neighbor;
          }) != last)
        throw std::invalid_argument("SymmetricMatrix: duplicate pair");
    }
    return m;
  }

  /// Builds directly from per-row entry lists that are already sorted and
  /// mutually symmetric (used when merging two symmetric matrices row by row).
  static SymmetricMatrix from_rows(std::vector<std::vector<Entry>> rows) {
    SymmetricMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) m.offsets_[i + 1] = m.offsets_[i] + rows[i].size();
    m.entries_.reserve(m.offsets_.back());
    for (auto& row : rows) m.entries_.insert(m.entries_.end(), row.begin(), row.end());
    return m;
  }

  std::size_t n_terms() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  /// Number of unordered pairs.
  std::size_t pair_count() const { return entries_.size() / 2; }
  bool empty() const { return entries_.empty(); }

  std::span<const Entry> row(TermId a) const {
    if (a >= n_terms()) return {};
    return std::span<const Entry>(entries_).subspan(offsets_[a], offsets_[a + 1] - offsets_[a]);
  }

  std::optional<T> find(TermId a, TermId b) const {
    const auto r = row(a);
    auto it = std::lower_bound(r.begin(), r.end(), b,
                               [](const Entry& e, TermId id) { return e.neighbor < id; });
    if (it == r.end() || it->neighbor != b) return std::nullopt;
    return it->value;
  }

  /// Visits each unordered pair once as (a, b, value) with a < b, in
  /// ascending (a, b) order.
  template <typename Fn>
  void for_each_pair(Fn&& fn) const {
    for (TermId a = 0; a < n_terms(); ++a)
      for (const auto& e : row(a))
        if (a < e.neighbor) fn(a, e.neighbor, e.value);
  }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
};

}  // namespace volatext
