#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace frobkit {

inline constexpr int kMaxDimension = 10;

/// Bit j-1 set <=> index j belongs to the multi-index.
using IndexMask = std::uint16_t;

/// Sign of the permutation sorting `seq` ascending; 0 if an entry repeats.
int perm_sign(std::span<const int> seq);

std::size_t binomial(int n, int k);

/// Sign of e_a ∧ e_b relative to e_{a ∪ b}; 0 when the index sets overlap.
int wedge_sign(IndexMask a, IndexMask b);

inline int popcount(IndexMask mask) { return __builtin_popcount(mask); }

/// I(n,k) in lexicographic order of the increasing tuples.
const std::vector<IndexMask>& index_table(int n, int k);

/// Position of `mask` inside index_table(n, popcount(mask)).
std::size_t index_position(int n, IndexMask mask);

/// A strictly increasing tuple of indices in 1..n.
class MultiIndex {
 public:
  MultiIndex(int n, std::vector<int> entries);

  static MultiIndex from_mask(int n, IndexMask mask);
  static MultiIndex at(int n, int k, std::size_t position);

  int n() const { return n_; }
  int k() const { return static_cast<int>(entries_.size()); }
  const std::vector<int>& entries() const { return entries_; }
  IndexMask mask() const { return mask_; }
  std::size_t position() const { return index_position(n_, mask_); }

  /// The indices of 1..n not in this multi-index, increasing.
  MultiIndex complement() const;

  std::string to_string() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.n_ == b.n_ && a.mask_ == b.mask_;
  }

 private:
  MultiIndex(int n, IndexMask mask, std::vector<int> entries)
      : n_(n), mask_(mask), entries_(std::move(entries)) {}

  int n_;
  IndexMask mask_;
  std::vector<int> entries_;
};

}  // namespace frobkit
