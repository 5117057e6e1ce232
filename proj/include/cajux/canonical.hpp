#pragma once

#include <compare>
#include <vector>

#include "cajux/array.hpp"

namespace cajux {

/// Column-major flattening of an array; the key of the lexicographic order.
using LexVector = std::vector<Symbol>;

LexVector lex_vector(const CoveringArray& a);

/// First-difference comparison of lex vectors. Throws std::invalid_argument
/// on a shape mismatch.
std::strong_ordering lex_compare(const CoveringArray& a, const CoveringArray& b);

/// The lexicographically smallest member of an isomorphism class under row
/// permutations, column permutations and independent per-column relabelings.
class CanonicalForm {
 public:
  /// Wraps an array already known to be a class minimum (for example one
  /// read back from a trusted library). No check is made.
  static CanonicalForm trusted(CoveringArray minimum);

  const CoveringArray& array() const noexcept { return array_; }
  const LexVector& lex() const noexcept { return lex_; }

  friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) { return a.lex_ == b.lex_ && a.array_ == b.array_; }
  friend std::strong_ordering operator<=>(const CanonicalForm& a, const CanonicalForm& b) { return a.lex_ <=> b.lex_; }

 private:
  explicit CanonicalForm(CoveringArray a);
  friend CanonicalForm canonical_minimum(const CoveringArray& a);

  CoveringArray array_;
  LexVector lex_;
};

/// A* for the class of `a`. Deterministic; the declared strength is kept.
CanonicalForm canonical_minimum(const CoveringArray& a);

/// canonical_minimum(a).array() == a, decided with early exit.
bool is_canonical(const CoveringArray& a);

/// Throws std::invalid_argument on a shape mismatch.
bool are_isomorphic(const CoveringArray& a, const CoveringArray& b);

/// Pruning test for an orderly generator. The first `filled` cells in
/// column-major order are assigned; the rest are ignored. Returns false only
/// when some isomorphism provably yields a strictly smaller array on the
/// filled prefix, so it never rejects a prefix of a class minimum. It may
/// accept prefixes that are not extendable to one.
///
/// Checks: the completed columns form a class minimum; the partial column is
/// nondecreasing inside each run of equal completed prefixes and is not below
/// the previous column; no relabeling of the partial column, followed by
/// re-sorting inside those runs, is provably smaller.
bool is_partial_minimum(const CoveringArray& a, int filled);

}  // namespace cajux
