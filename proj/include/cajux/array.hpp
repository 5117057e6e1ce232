#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace cajux {

using Symbol = std::uint8_t;

/// Shape of a covering array CA(N; t, k, v).
struct Params {
  int N = 0;  ///< rows
  int t = 0;  ///< strength
  int k = 0;  ///< columns
  int v = 0;  ///< order (alphabet size)

  friend bool operator==(const Params&, const Params&) = default;
};

/// Throws std::invalid_argument unless N >= 1, 1 <= t <= k and 2 <= v <= 256.
void validate(const Params& p);

/// v^e, saturating at INT64_MAX.
std::int64_t power(int v, int e);

/// An N x k array over {0, ..., v-1} with a declared strength. Cells are
/// row-major. Immutable after construction; the declared strength is a label
/// and is only certified by verify_strength().
class CoveringArray {
 public:
  CoveringArray(Params p, std::vector<Symbol> cells);

  /// Convenience for literals and tests: one inner list per row.
  static CoveringArray from_rows(int t, int v, std::initializer_list<std::initializer_list<int>> rows);
  static CoveringArray from_rows(int t, int v, const std::vector<std::vector<int>>& rows);

  const Params& params() const noexcept { return p_; }
  int rows() const noexcept { return p_.N; }
  int cols() const noexcept { return p_.k; }
  int order() const noexcept { return p_.v; }
  int strength() const noexcept { return p_.t; }

  Symbol operator()(int r, int c) const noexcept {
    return cells_[static_cast<std::size_t>(r) * p_.k + c];
  }
  std::span<const Symbol> row(int r) const noexcept {
    return {cells_.data() + static_cast<std::size_t>(r) * p_.k, static_cast<std::size_t>(p_.k)};
  }
  std::vector<Symbol> column(int c) const;
  std::span<const Symbol> cells() const noexcept { return cells_; }

  /// Same cells, different declared strength.
  CoveringArray with_strength(int t) const;

  friend bool operator==(const CoveringArray&, const CoveringArray&) = default;

 private:
  Params p_;
  std::vector<Symbol> cells_;
};

/// A bijection on {0, ..., v-1}, applied to the symbols of one column.
class SymbolPermutation {
 public:
  explicit SymbolPermutation(std::vector<Symbol> mapping);

  static SymbolPermutation identity(int v);

  /// All v! permutations in lexicographic order of their mapping vectors, so
  /// the identity comes first.
  static std::vector<SymbolPermutation> all(int v);

  int order() const noexcept { return static_cast<int>(map_.size()); }
  Symbol operator()(Symbol s) const noexcept { return map_[s]; }
  std::span<const Symbol> mapping() const noexcept { return map_; }
  SymbolPermutation inverse() const;

  friend bool operator==(const SymbolPermutation&, const SymbolPermutation&) = default;

 private:
  std::vector<Symbol> map_;
};

/// Element-wise relabeling of a column. Throws std::invalid_argument on a
/// symbol outside the permutation's range.
std::vector<Symbol> relabel_column(std::span<const Symbol> column, const SymbolPermutation& eps);

}  // namespace cajux
