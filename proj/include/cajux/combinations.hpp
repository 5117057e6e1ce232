#pragma once

#include <numeric>
#include <span>
#include <vector>

namespace cajux {

/// Calls f(subset) for every s-subset of {0, ..., n-1} in lexicographic order.
/// f returns false to stop early; the function returns false iff stopped.
template <class F>
bool for_each_combination(int n, int s, F&& f) {
  if (s < 0 || s > n) return true;
  std::vector<int> idx(s);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!f(std::span<const int>(idx))) return false;
    int i = s - 1;
    while (i >= 0 && idx[i] == n - s + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (int j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// C(n, s) as a 64-bit count (no overflow at the sizes used here).
inline long long binomial(int n, int s) {
  if (s < 0 || s > n) return 0;
  long long r = 1;
  for (int i = 1; i <= s; ++i) r = r * (n - s + i) / i;
  return r;
}

}  // namespace cajux
