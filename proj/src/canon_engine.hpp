#pragma once

#include <span>
#include <vector>

#include "cajux/array.hpp"

namespace cajux::detail {

/// Row-major view of the leading `cols` columns of a matrix whose rows are
/// `stride` symbols apart.
struct MatrixRef {
  int rows = 0;
  int cols = 0;
  int v = 2;
  int stride = 0;
  const Symbol* data = nullptr;

  Symbol at(int r, int c) const noexcept { return data[static_cast<std::size_t>(r) * stride + c]; }
};

inline MatrixRef view(const CoveringArray& a) {
  return {a.rows(), a.cols(), a.order(), a.cols(), a.cells().data()};
}

/// Column-major cells of the class minimum of m.
std::vector<Symbol> minimum_lex(MatrixRef m);

/// True iff m is the minimum of its class.
bool is_minimum(MatrixRef m);

/// Relabel-and-resort part of the partial-minimum test for column `col`
/// whose first `filled` rows are assigned. Rows are grouped by equal values
/// in columns [0, col). Returns false when some relabeling is provably
/// smaller; also rejects a decrease inside a group.
bool partial_column_ok(MatrixRef m, int col, int filled);

}  // namespace cajux::detail
