#pragma once

#include <compare>
#include <vector>

namespace cajux {

enum class BoundKind { exact, lower };

/// A value for CAN(t, k, v): exact when a closed form or a tabulated result
/// applies, otherwise a lower bound.
struct Bound {
  BoundKind kind = BoundKind::lower;
  int value = 0;

  friend bool operator==(const Bound&, const Bound&) = default;
};

/// Closed forms used:
///   CAN(1,k,v) = v;  CAN(t,t,v) = v^t;
///   v = 2: CAN(t,t+1,2) = 2^t, CAN(t,t+2,2) = floor(4 * 2^t / 3),
///          CAN(2,k,2) = least N with C(N-1, ceil(N/2)) >= k;
///   v a prime power: CAN(t,k,v) = v^t for k <= v+1 when v > t, for k = t+1
///          when v <= t, and for t = 3, k <= v+2 when v is a power of two.
/// Then a small table of computed values. Otherwise the lower bound
/// max(v^t, v * CAN(t-1,k-1,v), CAN(t,k-1,v)), recursively.
/// Throws std::invalid_argument unless 1 <= t <= k and v >= 2.
Bound can_bound(int t, int k, int v);

/// Sizes {N_0 <= ... <= N_{v-1}} of the blocks a CA(N; t+1, k+1, v) can split
/// into: each N_i >= can_bound(t, k, v).value and the sum is N.
struct ValidMultiset {
  std::vector<int> sizes;

  friend auto operator<=>(const ValidMultiset&, const ValidMultiset&) = default;
};

/// All valid multisets in lexicographic order. Empty means no
/// CA(N; t+1, k+1, v) exists.
std::vector<ValidMultiset> valid_multisets(int N, int t, int k, int v);

}  // namespace cajux
