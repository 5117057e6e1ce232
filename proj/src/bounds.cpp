#include "cajux/bounds.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>

#include "cajux/array.hpp"
#include "cajux/combinations.hpp"

namespace cajux {

namespace {

struct Known {
  int t, k, v, value;
};

// Values established by exhaustive search rather than a closed form.
constexpr Known kTable[] = {
    {2, 5, 3, 11}, {2, 6, 3, 12}, {2, 8, 3, 13},  {3, 6, 3, 33},  {3, 12, 2, 15},  {3, 13, 2, 16},
    {4, 13, 2, 32}, {5, 8, 2, 52}, {5, 9, 2, 54}, {5, 14, 2, 64}, {6, 15, 2, 128}, {7, 16, 2, 256},
};

int capped_power(int v, int e) {
  const auto p = power(v, e);
  return p > std::numeric_limits<int>::max() ? std::numeric_limits<int>::max() : static_cast<int>(p);
}

bool is_prime_power(int v) {
  int p = 2;
  while (p * p <= v && v % p != 0) ++p;
  if (v % p != 0) p = v;
  while (v % p == 0) v /= p;
  return v == 1;
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// Least N with C(N-1, ceil(N/2)) >= k.
int binary_strength_two(int k) {
  for (int n = 2;; ++n)
    if (binomial(n - 1, (n + 1) / 2) >= k) return n;
}

std::optional<int> exact_value(int t, int k, int v) {
  if (t == 1) return v;
  if (t == k) return capped_power(v, t);
  if (v == 2) {
    if (k == t + 1) return capped_power(2, t);
    if (k == t + 2) return static_cast<int>(4 * power(2, t) / 3);
    if (t == 2) return binary_strength_two(k);
  }
  if (is_prime_power(v)) {
    if (v > t && k <= v + 1) return capped_power(v, t);
    if (v <= t && k == t + 1) return capped_power(v, t);
    if (t == 3 && is_power_of_two(v) && k <= v + 2) return capped_power(v, 3);
  }
  for (const auto& e : kTable)
    if (e.t == t && e.k == k && e.v == v) return e.value;
  return std::nullopt;
}

Bound bound_memo(int t, int k, int v, std::map<std::pair<int, int>, Bound>& memo) {
  if (auto it = memo.find({t, k}); it != memo.end()) return it->second;
  Bound b;
  if (auto exact = exact_value(t, k, v)) {
    b = {BoundKind::exact, *exact};
  } else {
    long long lower = capped_power(v, t);
    lower = std::max<long long>(lower, static_cast<long long>(v) * bound_memo(t - 1, k - 1, v, memo).value);
    if (k - 1 >= t) lower = std::max<long long>(lower, bound_memo(t, k - 1, v, memo).value);
    b = {BoundKind::lower, static_cast<int>(std::min<long long>(lower, std::numeric_limits<int>::max()))};
  }
  memo.emplace(std::pair{t, k}, b);
  return b;
}

void compose(int remaining, int parts, int min_part, std::vector<int>& cur, std::vector<ValidMultiset>& out) {
  if (parts == 0) {
    if (remaining == 0) out.push_back({cur});
    return;
  }
  for (int x = min_part; static_cast<long long>(x) * parts <= remaining; ++x) {
    cur.push_back(x);
    compose(remaining - x, parts - 1, x, cur, out);
    cur.pop_back();
  }
}

}  // namespace

Bound can_bound(int t, int k, int v) {
  if (v < 2) throw std::invalid_argument("can_bound: v must be at least 2");
  if (t < 1 || t > k) throw std::invalid_argument("can_bound: need 1 <= t <= k");
  std::map<std::pair<int, int>, Bound> memo;
  return bound_memo(t, k, v, memo);
}

std::vector<ValidMultiset> valid_multisets(int N, int t, int k, int v) {
  const int least = can_bound(t, k, v).value;
  std::vector<ValidMultiset> out;
  std::vector<int> cur;
  if (N >= 0) compose(N, v, least, cur, out);
  return out;
}

}  // namespace cajux
