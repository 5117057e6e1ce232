#include "cajux/transform.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cajux {

CoveringArray vstack(std::span<const CoveringArray> blocks) {
  if (blocks.empty()) throw std::invalid_argument("vstack of no blocks");
  const Params& first = blocks.front().params();
  std::vector<Symbol> cells;
  int n = 0;
  for (const auto& b : blocks) {
    if (b.cols() != first.k || b.order() != first.v)
      throw std::invalid_argument("vstack: blocks disagree on k or v");
    cells.insert(cells.end(), b.cells().begin(), b.cells().end());
    n += b.rows();
  }
  return CoveringArray({n, first.t, first.k, first.v}, std::move(cells));
}

CoveringArray with_constant_column(const CoveringArray& j, std::span<const int> sizes) {
  if (static_cast<int>(sizes.size()) != j.order())
    throw std::invalid_argument("with_constant_column: need one size per symbol");
  if (std::any_of(sizes.begin(), sizes.end(), [](int s) { return s < 0; }))
    throw std::invalid_argument("with_constant_column: negative block size");
  if (std::accumulate(sizes.begin(), sizes.end(), 0) != j.rows())
    throw std::invalid_argument("with_constant_column: sizes do not sum to the row count");
  const int k = j.cols();
  std::vector<Symbol> cells;
  cells.reserve(static_cast<std::size_t>(j.rows()) * (k + 1));
  int r = 0;
  for (std::size_t sym = 0; sym < sizes.size(); ++sym) {
    for (int n = 0; n < sizes[sym]; ++n, ++r) {
      auto row = j.row(r);
      cells.insert(cells.end(), row.begin(), row.end());
      cells.push_back(static_cast<Symbol>(sym));
    }
  }
  return CoveringArray({j.rows(), j.strength(), k + 1, j.order()}, std::move(cells));
}

BlockSplit split_by_last_column(const CoveringArray& c) {
  const int k = c.cols();
  if (k < 2) throw std::invalid_argument("split_by_last_column needs at least two columns");
  const int v = c.order();
  const int t = std::min(std::max(1, c.strength() - 1), k - 1);
  std::vector<std::vector<Symbol>> cells(v);
  BlockSplit out;
  out.sizes.assign(v, 0);
  for (int r = 0; r < c.rows(); ++r) {
    const Symbol last = c(r, k - 1);
    auto row = c.row(r);
    cells[last].insert(cells[last].end(), row.begin(), row.end() - 1);
    ++out.sizes[last];
  }
  for (int i = 0; i < v; ++i) {
    if (out.sizes[i] == 0)
      out.blocks.emplace_back(std::nullopt);
    else
      out.blocks.emplace_back(CoveringArray({out.sizes[i], t, k - 1, v}, std::move(cells[i])));
  }
  return out;
}

std::vector<CoveringArray> present_blocks(const BlockSplit& split) {
  std::vector<CoveringArray> out;
  for (const auto& b : split.blocks)
    if (b) out.push_back(*b);
  return out;
}

}  // namespace cajux
