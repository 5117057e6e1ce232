#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cajux/array.hpp"

namespace cajux {

/// Rows concatenated in block order. All blocks must share k and v; the
/// result keeps the first block's declared strength.
CoveringArray vstack(std::span<const CoveringArray> blocks);

/// (J E): J with one appended column holding sizes[i] copies of symbol i, in
/// block order. sizes has one entry per symbol; zero entries are allowed.
/// Throws std::invalid_argument unless sum(sizes) == J.rows() and
/// sizes.size() == J.order().
CoveringArray with_constant_column(const CoveringArray& j, std::span<const int> sizes);

/// Rows of C grouped by their last-column symbol.
struct BlockSplit {
  /// blocks[i] holds the rows whose last symbol is i, last column removed, in
  /// their original relative order. Empty when no row carries symbol i.
  std::vector<std::optional<CoveringArray>> blocks;
  std::vector<int> sizes;
};

/// Stable split on the last column. Requires at least two columns. Each block
/// is labeled with strength max(1, t-1), capped at k-1.
BlockSplit split_by_last_column(const CoveringArray& c);

/// The non-empty blocks of a split, in symbol order.
std::vector<CoveringArray> present_blocks(const BlockSplit& split);

}  // namespace cajux
