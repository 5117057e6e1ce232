#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cajux/array.hpp"

namespace cajux {

/// Mixed-radix rank of a tuple over Z_v: sum x_j * v^(s-1-j), columns taken
/// in ascending order. This is the bit position used by CoverageTracker.
std::int64_t tuple_rank(std::span<const Symbol> tuple, int v);

/// A t-tuple that never appears in the given columns.
struct UncoveredWitness {
  std::vector<int> columns;
  std::vector<Symbol> tuple;
};

/// First uncovered (column set, tuple) in lexicographic subset order and rank
/// order, or nullopt when every s-column subarray covers all v^s tuples.
/// Throws std::invalid_argument unless 1 <= s <= k.
std::optional<UncoveredWitness> find_uncovered(const CoveringArray& a, int s);

/// True iff every s-column subarray of `a` covers all v^s tuples.
bool verify_strength(const CoveringArray& a, int s);

/// Checks only the s-subsets of columns {0..r} that contain column r; the
/// other subsets are assumed to have been certified when their own last
/// column was placed. Columns beyond r are ignored.
/// Throws std::invalid_argument if r < s-1 or r >= k.
bool verify_prefix(const CoveringArray& partial, int r, int s);

/// Incremental coverage state for strength s: one bit-vector of length v^s
/// per s-subset of the columns added so far. Plain value type, so a search
/// can snapshot it on descent and restore it on backtrack.
class CoverageTracker {
 public:
  struct Subset {
    std::vector<int> columns;
    std::vector<std::uint64_t> bits;
    std::int64_t covered = 0;
  };

  CoverageTracker(int v, int strength);

  int order() const noexcept { return v_; }
  int strength() const noexcept { return s_; }

  /// Records every s-subset of {0..r} containing r. Returns true iff all of
  /// them are complete (vacuously true while r < s-1). Requires
  /// r == columns_seen().
  bool add_column(const CoveringArray& partial, int r);

  /// Forgets columns >= r.
  void truncate(int r);

  int columns_seen() const noexcept { return columns_; }
  std::span<const Subset> subsets() const noexcept { return subsets_; }
  bool complete() const noexcept;

 private:
  int v_;
  int s_;
  std::int64_t tuples_;
  int columns_ = 0;
  std::vector<Subset> subsets_;
};

}  // namespace cajux
