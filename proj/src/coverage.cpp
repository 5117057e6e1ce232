#include "cajux/coverage.hpp"

#include <bit>
#include <stdexcept>

#include "cajux/combinations.hpp"

namespace cajux {

namespace {

void check_strength_arg(const CoveringArray& a, int s) {
  if (s < 1 || s > a.cols())
    throw std::invalid_argument("strength " + std::to_string(s) + " not in [1, " + std::to_string(a.cols()) + "]");
}

std::vector<std::uint64_t> coverage_bits(const CoveringArray& a, std::span<const int> cols, std::int64_t tuples) {
  std::vector<std::uint64_t> bits((tuples + 63) / 64, 0);
  const int v = a.order();
  for (int r = 0; r < a.rows(); ++r) {
    std::int64_t rank = 0;
    for (int c : cols) rank = rank * v + a(r, c);
    bits[rank >> 6] |= std::uint64_t{1} << (rank & 63);
  }
  return bits;
}

std::int64_t popcount(const std::vector<std::uint64_t>& bits) {
  std::int64_t n = 0;
  for (auto w : bits) n += std::popcount(w);
  return n;
}

std::vector<Symbol> unrank(std::int64_t rank, int s, int v) {
  std::vector<Symbol> x(s);
  for (int j = s - 1; j >= 0; --j) {
    x[j] = static_cast<Symbol>(rank % v);
    rank /= v;
  }
  return x;
}

}  // namespace

std::int64_t tuple_rank(std::span<const Symbol> tuple, int v) {
  std::int64_t rank = 0;
  for (Symbol x : tuple) rank = rank * v + x;
  return rank;
}

std::optional<UncoveredWitness> find_uncovered(const CoveringArray& a, int s) {
  check_strength_arg(a, s);
  const std::int64_t tuples = power(a.order(), s);
  std::optional<UncoveredWitness> witness;
  for_each_combination(a.cols(), s, [&](std::span<const int> cols) {
    auto bits = coverage_bits(a, cols, tuples);
    if (popcount(bits) == tuples) return true;
    for (std::int64_t rank = 0; rank < tuples; ++rank) {
      if (!(bits[rank >> 6] >> (rank & 63) & 1)) {
        witness = UncoveredWitness{{cols.begin(), cols.end()}, unrank(rank, s, a.order())};
        break;
      }
    }
    return false;
  });
  return witness;
}

bool verify_strength(const CoveringArray& a, int s) { return !find_uncovered(a, s).has_value(); }

bool verify_prefix(const CoveringArray& partial, int r, int s) {
  if (s < 1) throw std::invalid_argument("strength must be positive");
  if (r < s - 1) throw std::invalid_argument("verify_prefix: r < s - 1 leaves no s-subset containing r");
  if (r >= partial.cols()) throw std::invalid_argument("verify_prefix: column index out of range");
  const std::int64_t tuples = power(partial.order(), s);
  std::vector<int> cols(s);
  return for_each_combination(r, s - 1, [&](std::span<const int> head) {
    std::copy(head.begin(), head.end(), cols.begin());
    cols.back() = r;
    return popcount(coverage_bits(partial, cols, tuples)) == tuples;
  });
}

CoverageTracker::CoverageTracker(int v, int strength) : v_(v), s_(strength), tuples_(power(v, strength)) {
  if (v < 2) throw std::invalid_argument("order must be at least 2");
  if (strength < 1) throw std::invalid_argument("strength must be positive");
}

bool CoverageTracker::add_column(const CoveringArray& partial, int r) {
  if (partial.order() != v_) throw std::invalid_argument("tracker order mismatch");
  if (r != columns_) throw std::invalid_argument("columns must be added in order");
  if (r >= partial.cols()) throw std::invalid_argument("add_column: column index out of range");
  if (r < s_ - 1) {
    columns_ = r + 1;
    return true;
  }
  bool all = true;
  std::vector<int> cols(s_);
  for_each_combination(r, s_ - 1, [&](std::span<const int> head) {
    std::copy(head.begin(), head.end(), cols.begin());
    cols.back() = r;
    Subset sub{cols, coverage_bits(partial, cols, tuples_), 0};
    sub.covered = popcount(sub.bits);
    all = all && sub.covered == tuples_;
    subsets_.push_back(std::move(sub));
    return true;
  });
  columns_ = r + 1;
  return all;
}

void CoverageTracker::truncate(int r) {
  std::erase_if(subsets_, [r](const Subset& s) { return s.columns.back() >= r; });
  if (columns_ > r) columns_ = r;
}

bool CoverageTracker::complete() const noexcept {
  for (const auto& s : subsets_)
    if (s.covered != tuples_) return false;
  return true;
}

}  // namespace cajux
