#include "cajux/array.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cajux {

void validate(const Params& p) {
  if (p.N < 1) throw std::invalid_argument("covering array needs at least one row");
  if (p.k < 1) throw std::invalid_argument("covering array needs at least one column");
  if (p.v < 2 || p.v > 256) throw std::invalid_argument("order v must be in [2, 256]");
  if (p.t < 1 || p.t > p.k) throw std::invalid_argument("strength t must satisfy 1 <= t <= k");
}

std::int64_t power(int v, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::int64_t>::max() / v) return std::numeric_limits<std::int64_t>::max();
    r *= v;
  }
  return r;
}

CoveringArray::CoveringArray(Params p, std::vector<Symbol> cells) : p_(p), cells_(std::move(cells)) {
  validate(p_);
  if (cells_.size() != static_cast<std::size_t>(p_.N) * p_.k)
    throw std::invalid_argument("cell count does not match N x k");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i] >= p_.v)
      throw std::invalid_argument("symbol " + std::to_string(cells_[i]) + " out of range at row " +
                                  std::to_string(i / p_.k) + ", column " + std::to_string(i % p_.k));
  }
}

CoveringArray CoveringArray::from_rows(int t, int v, const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw std::invalid_argument("covering array needs at least one row");
  const int k = static_cast<int>(rows.front().size());
  std::vector<Symbol> cells;
  cells.reserve(rows.size() * k);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != k) throw std::invalid_argument("ragged rows");
    for (int x : row) {
      if (x < 0 || x >= v) throw std::invalid_argument("symbol out of range");
      cells.push_back(static_cast<Symbol>(x));
    }
  }
  return CoveringArray({static_cast<int>(rows.size()), t, k, v}, std::move(cells));
}

CoveringArray CoveringArray::from_rows(int t, int v, std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<std::vector<int>> copy;
  for (const auto& r : rows) copy.emplace_back(r);
  return from_rows(t, v, copy);
}

std::vector<Symbol> CoveringArray::column(int c) const {
  std::vector<Symbol> out(p_.N);
  for (int r = 0; r < p_.N; ++r) out[r] = (*this)(r, c);
  return out;
}

CoveringArray CoveringArray::with_strength(int t) const {
  return CoveringArray({p_.N, t, p_.k, p_.v}, cells_);
}

SymbolPermutation::SymbolPermutation(std::vector<Symbol> mapping) : map_(std::move(mapping)) {
  if (map_.empty() || map_.size() > 256) throw std::invalid_argument("permutation size must be in [1, 256]");
  std::vector<bool> seen(map_.size(), false);
  for (Symbol s : map_) {
    if (s >= map_.size() || seen[s]) throw std::invalid_argument("symbol mapping is not a bijection");
    seen[s] = true;
  }
}

SymbolPermutation SymbolPermutation::identity(int v) {
  std::vector<Symbol> m(v);
  std::iota(m.begin(), m.end(), Symbol{0});
  return SymbolPermutation(std::move(m));
}

std::vector<SymbolPermutation> SymbolPermutation::all(int v) {
  std::vector<Symbol> m(v);
  std::iota(m.begin(), m.end(), Symbol{0});
  std::vector<SymbolPermutation> out;
  do {
    out.emplace_back(m);
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

SymbolPermutation SymbolPermutation::inverse() const {
  std::vector<Symbol> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = static_cast<Symbol>(i);
  return SymbolPermutation(std::move(inv));
}

std::vector<Symbol> relabel_column(std::span<const Symbol> column, const SymbolPermutation& eps) {
  std::vector<Symbol> out(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (column[i] >= eps.order()) throw std::invalid_argument("symbol out of range for relabeling");
    out[i] = eps(column[i]);
  }
  return out;
}

}  // namespace cajux
