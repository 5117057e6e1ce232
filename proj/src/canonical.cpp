#include "cajux/canonical.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "canon_engine.hpp"

namespace cajux {

namespace detail {

namespace {

std::vector<std::vector<Symbol>> symbol_permutations(int v) {
  std::vector<std::vector<Symbol>> out;
  for (const auto& p : SymbolPermutation::all(v)) out.emplace_back(p.mapping().begin(), p.mapping().end());
  return out;
}

// Branch over (column, relabeling) choices depth by depth. At each depth the
// rows are partitioned into runs of equal prefix; sorting a candidate column
// inside each run gives the smallest column reachable by row permutations,
// so only choices attaining the per-depth minimum are expanded.
class MinimumSearch {
 public:
  MinimumSearch(MatrixRef m, bool test_only)
      : m_(m), test_(test_only), n_(m.rows), k_(m.cols), perms_(symbol_permutations(m.v)) {
    classify_columns();
    best_.assign(static_cast<std::size_t>(n_) * k_, 0);
  }

  // Test mode: false as soon as something smaller than the input turns up.
  bool run() {
    std::vector<int> order(n_);
    std::iota(order.begin(), order.end(), 0);
    auto row_less = [this](int a, int b) {
      for (int c = 0; c < k_; ++c) {
        if (m_.at(a, c) != m_.at(b, c)) return m_.at(a, c) < m_.at(b, c);
      }
      return false;
    };
    if (test_) {
      for (int r = 1; r < n_; ++r)
        if (row_less(r, r - 1)) return false;
    } else {
      std::stable_sort(order.begin(), order.end(), row_less);
    }
    // Any isomorph is an upper bound; start from the (sorted) input.
    for (int c = 0; c < k_; ++c)
      for (int r = 0; r < n_; ++r) best_[static_cast<std::size_t>(c) * n_ + r] = m_.at(order[r], c);
    best_valid_ = k_;
    used_.assign(k_, 0);
    std::vector<int> starts{0, n_};
    descend(0, order, starts);
    return !smaller_found_;
  }

  std::vector<Symbol> take_best() { return std::move(best_); }

 private:
  struct Choice {
    int col;
    int perm;
  };

  void classify_columns() {
    class_.resize(k_);
    std::vector<int> fwd(m_.v), back(m_.v);
    for (int c = 0; c < k_; ++c) {
      class_[c] = c;
      for (int d = 0; d < c; ++d) {
        if (class_[d] != d) continue;
        std::fill(fwd.begin(), fwd.end(), -1);
        std::fill(back.begin(), back.end(), -1);
        bool same = true;
        for (int r = 0; r < n_ && same; ++r) {
          const int x = m_.at(r, d), y = m_.at(r, c);
          if (fwd[x] == -1 && back[y] == -1) {
            fwd[x] = y;
            back[y] = x;
          } else if (fwd[x] != y || back[y] != x) {
            same = false;
          }
        }
        if (same) {
          class_[c] = d;
          break;
        }
      }
    }
  }

  void build_column(const std::vector<int>& order, const std::vector<int>& starts, int col,
                    const std::vector<Symbol>& perm, Symbol* out) const {
    std::vector<int> counts(m_.v);
    for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
      std::fill(counts.begin(), counts.end(), 0);
      for (int p = starts[i]; p < starts[i + 1]; ++p) ++counts[perm[m_.at(order[p], col)]];
      for (int s = 0; s < m_.v; ++s)
        for (int j = 0; j < counts[s]; ++j) *out++ = static_cast<Symbol>(s);
    }
  }

  // Returns false once a smaller array has been found in test mode.
  bool descend(int depth, const std::vector<int>& order, const std::vector<int>& starts) {
    if (depth == k_) return true;
    std::vector<Symbol> min_col(n_), col(n_);
    std::vector<Choice> ties;
    std::vector<char> class_tried(k_, 0);
    std::vector<char> present(m_.v);
    std::vector<std::vector<Symbol>> seen;
    bool have_min = false;
    for (int c = 0; c < k_; ++c) {
      if (used_[c] || class_tried[class_[c]]) continue;
      class_tried[class_[c]] = 1;
      std::fill(present.begin(), present.end(), 0);
      for (int r = 0; r < n_; ++r) present[m_.at(r, c)] = 1;
      seen.clear();
      for (int p = 0; p < static_cast<int>(perms_.size()); ++p) {
        // Relabelings that agree on the symbols present give the same branch.
        std::vector<Symbol> restricted;
        for (int s = 0; s < m_.v; ++s)
          if (present[s]) restricted.push_back(perms_[p][s]);
        if (std::find(seen.begin(), seen.end(), restricted) != seen.end()) continue;
        seen.push_back(std::move(restricted));

        build_column(order, starts, c, perms_[p], col.data());
        const int cmp = have_min ? std::memcmp(col.data(), min_col.data(), n_) : -1;
        if (cmp < 0) {
          min_col.swap(col);
          ties.assign(1, {c, p});
          have_min = true;
        } else if (cmp == 0) {
          ties.push_back({c, p});
        }
      }
    }

    Symbol* best = best_.data() + static_cast<std::size_t>(depth) * n_;
    if (depth >= best_valid_) {
      std::memcpy(best, min_col.data(), n_);
      best_valid_ = depth + 1;
    } else {
      const int cmp = std::memcmp(min_col.data(), best, n_);
      if (cmp > 0) return true;
      if (cmp < 0) {
        if (test_) {
          smaller_found_ = true;
          return false;
        }
        std::memcpy(best, min_col.data(), n_);
        best_valid_ = depth + 1;
      }
    }

    std::vector<int> next_order(n_);
    std::vector<int> next_starts;
    std::vector<int> counts(m_.v), offset(m_.v);
    for (const Choice& ch : ties) {
      const auto& perm = perms_[ch.perm];
      next_starts.assign(1, 0);
      for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
        std::fill(counts.begin(), counts.end(), 0);
        for (int p = starts[i]; p < starts[i + 1]; ++p) ++counts[perm[m_.at(order[p], ch.col)]];
        int pos = starts[i];
        for (int s = 0; s < m_.v; ++s) {
          offset[s] = pos;
          pos += counts[s];
          if (counts[s] > 0) next_starts.push_back(pos);
        }
        for (int p = starts[i]; p < starts[i + 1]; ++p) {
          const int row = order[p];
          next_order[offset[perm[m_.at(row, ch.col)]]++] = row;
        }
      }
      used_[ch.col] = 1;
      const bool go_on = descend(depth + 1, next_order, next_starts);
      used_[ch.col] = 0;
      if (!go_on) return false;
    }
    return true;
  }

  MatrixRef m_;
  bool test_;
  int n_;
  int k_;
  std::vector<std::vector<Symbol>> perms_;
  std::vector<int> class_;
  std::vector<char> used_;
  std::vector<Symbol> best_;
  int best_valid_ = 0;
  bool smaller_found_ = false;
};

bool rows_equal_prefix(MatrixRef m, int a, int b, int cols) {
  for (int c = 0; c < cols; ++c)
    if (m.at(a, c) != m.at(b, c)) return false;
  return true;
}

}  // namespace

std::vector<Symbol> minimum_lex(MatrixRef m) {
  MinimumSearch search(m, false);
  search.run();
  return search.take_best();
}

bool is_minimum(MatrixRef m) {
  MinimumSearch search(m, true);
  return search.run();
}

bool partial_column_ok(MatrixRef m, int col, int filled) {
  if (filled <= 0) return true;
  std::vector<int> starts{0};
  for (int r = 1; r < m.rows; ++r)
    if (!rows_equal_prefix(m, r, r - 1, col)) starts.push_back(r);
  starts.push_back(m.rows);

  for (std::size_t i = 0; i + 1 < starts.size(); ++i)
    for (int r = starts[i] + 1; r < std::min(starts[i + 1], filled); ++r)
      if (m.at(r, col) < m.at(r - 1, col)) return false;

  if (col > 0) {
    for (int r = 0; r < filled; ++r) {
      if (m.at(r, col) != m.at(r, col - 1)) {
        if (m.at(r, col) < m.at(r, col - 1)) return false;
        break;
      }
    }
  }

  // For a relabeling p, the sorted image of the known part of a run bounds
  // the true sorted run from above position by position, so a strict win on
  // the known part is a strict win overall.
  std::vector<Symbol> z, x;
  const auto perms = symbol_permutations(m.v);
  for (std::size_t p = 1; p < perms.size(); ++p) {
    const auto& perm = perms[p];
    for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
      const int s = starts[i];
      if (s >= filled) break;
      const int e = std::min(starts[i + 1], filled);
      z.clear();
      x.clear();
      for (int r = s; r < e; ++r) {
        z.push_back(perm[m.at(r, col)]);
        x.push_back(m.at(r, col));
      }
      std::sort(z.begin(), z.end());
      const auto cmp = z <=> x;
      if (cmp < 0) return false;
      if (cmp > 0 || e < starts[i + 1]) break;
    }
  }
  return true;
}

}  // namespace detail

LexVector lex_vector(const CoveringArray& a) {
  LexVector out;
  out.reserve(a.cells().size());
  for (int c = 0; c < a.cols(); ++c)
    for (int r = 0; r < a.rows(); ++r) out.push_back(a(r, c));
  return out;
}

std::strong_ordering lex_compare(const CoveringArray& a, const CoveringArray& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("lex_compare: shapes differ");
  for (int c = 0; c < a.cols(); ++c)
    for (int r = 0; r < a.rows(); ++r)
      if (a(r, c) != b(r, c)) return a(r, c) <=> b(r, c);
  return std::strong_ordering::equal;
}

CanonicalForm::CanonicalForm(CoveringArray a) : array_(std::move(a)), lex_(lex_vector(array_)) {}

CanonicalForm CanonicalForm::trusted(CoveringArray minimum) { return CanonicalForm(std::move(minimum)); }

CanonicalForm canonical_minimum(const CoveringArray& a) {
  const auto lex = detail::minimum_lex(detail::view(a));
  const int n = a.rows(), k = a.cols();
  std::vector<Symbol> cells(lex.size());
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < n; ++r) cells[static_cast<std::size_t>(r) * k + c] = lex[static_cast<std::size_t>(c) * n + r];
  return CanonicalForm(CoveringArray(a.params(), std::move(cells)));
}

bool is_canonical(const CoveringArray& a) { return detail::is_minimum(detail::view(a)); }

bool are_isomorphic(const CoveringArray& a, const CoveringArray& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.order() != b.order())
    throw std::invalid_argument("are_isomorphic: shapes differ");
  return canonical_minimum(a).lex() == canonical_minimum(b).lex();
}

bool is_partial_minimum(const CoveringArray& a, int filled) {
  const int n = a.rows();
  if (filled < 0 || filled > n * a.cols()) throw std::invalid_argument("is_partial_minimum: filled out of range");
  const int full = filled / n;
  const int rest = filled % n;
  auto m = detail::view(a);
  if (full > 0) {
    auto prefix = m;
    prefix.cols = full;
    if (!detail::is_minimum(prefix)) return false;
  }
  if (rest > 0 && !detail::partial_column_ok(m, full, rest)) return false;
  return true;
}

}  // namespace cajux
