#include "frobkit/multi_index.hpp"

#include <array>
#include <bit>

#include "frobkit/error.hpp"

namespace frobkit {
namespace {

struct IndexTables {
  // tables[n][k]
  std::array<std::array<std::vector<IndexMask>, kMaxDimension + 1>,
             kMaxDimension + 1>
      tables;
  std::array<std::vector<std::uint16_t>, kMaxDimension + 1> positions;

  IndexTables() {
    for (int n = 0; n <= kMaxDimension; ++n) {
      positions[n].assign(std::size_t{1} << n, 0);
      for (int k = 0; k <= n; ++k) {
        std::vector<int> combo(k);
        for (int i = 0; i < k; ++i) combo[i] = i;
        while (true) {
          IndexMask mask = 0;
          for (int c : combo) mask |= static_cast<IndexMask>(1u << c);
          positions[n][mask] =
              static_cast<std::uint16_t>(tables[n][k].size());
          tables[n][k].push_back(mask);
          int i = k - 1;
          while (i >= 0 && combo[i] == n - k + i) --i;
          if (i < 0) break;
          ++combo[i];
          for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
        }
      }
    }
  }
};

const IndexTables& tables() {
  static const IndexTables instance;
  return instance;
}

void check_dimension(int n) {
  if (n < 0 || n > kMaxDimension) {
    throw DimensionMismatch("ambient dimension " + std::to_string(n) +
                            " outside 0.." + std::to_string(kMaxDimension));
  }
}

}  // namespace

int perm_sign(std::span<const int> seq) {
  int inversions = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] == seq[j]) return 0;
      if (seq[i] > seq[j]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::size_t>(n - k + i) /
             static_cast<std::size_t>(i);
  }
  return result;
}

int wedge_sign(IndexMask a, IndexMask b) {
  if (a & b) return 0;
  // Count pairs (i in a, j in b) with i > j: each needs one transposition.
  int swaps = 0;
  IndexMask rest = b;
  while (rest) {
    const int j = std::countr_zero(static_cast<unsigned>(rest));
    rest &= static_cast<IndexMask>(rest - 1);
    swaps += popcount(static_cast<IndexMask>(a >> (j + 1)));
  }
  return swaps % 2 == 0 ? 1 : -1;
}

const std::vector<IndexMask>& index_table(int n, int k) {
  check_dimension(n);
  if (k < 0 || k > n) {
    throw GradeError("grade " + std::to_string(k) + " outside 0.." +
                     std::to_string(n));
  }
  return tables().tables[n][k];
}

std::size_t index_position(int n, IndexMask mask) {
  check_dimension(n);
  return tables().positions[n][mask];
}

MultiIndex::MultiIndex(int n, std::vector<int> entries) : n_(n), mask_(0) {
  check_dimension(n);
  if (static_cast<int>(entries.size()) > n) {
    throw GradeError("multi-index longer than the ambient dimension");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i] < 1 || entries[i] > n) {
      throw DimensionMismatch("multi-index entry " +
                              std::to_string(entries[i]) + " outside 1.." +
                              std::to_string(n));
    }
    if (i > 0 && entries[i] <= entries[i - 1]) {
      throw GradeError("multi-index entries must be strictly increasing");
    }
    mask_ |= static_cast<IndexMask>(1u << (entries[i] - 1));
  }
  entries_ = std::move(entries);
}

MultiIndex MultiIndex::from_mask(int n, IndexMask mask) {
  check_dimension(n);
  std::vector<int> entries;
  for (int j = 0; j < n; ++j) {
    if (mask & (1u << j)) entries.push_back(j + 1);
  }
  if ((mask >> n) != 0) {
    throw DimensionMismatch("mask has bits beyond the ambient dimension");
  }
  return MultiIndex(n, mask, std::move(entries));
}

MultiIndex MultiIndex::at(int n, int k, std::size_t position) {
  return from_mask(n, index_table(n, k).at(position));
}

MultiIndex MultiIndex::complement() const {
  const auto full = static_cast<IndexMask>((1u << n_) - 1);
  return from_mask(n_, static_cast<IndexMask>(full & ~mask_));
}

std::string MultiIndex::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(entries_[i]);
  }
  return out + ")";
}

}  // namespace frobkit
