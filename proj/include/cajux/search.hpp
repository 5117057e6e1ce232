#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "cajux/bounds.hpp"
#include "cajux/budget.hpp"
#include "cajux/canonical.hpp"
#include "cajux/generator.hpp"

namespace cajux {

struct SearchOptions {
  int workers = 1;
  Budget budget;
  /// Check strength t+1 each time the last free block receives a column
  /// (from column t on). Disabling only costs time: completed arrays are
  /// always verified before they are reported.
  bool coverage_guard = true;
  /// For equal block sizes visit only tuples whose library indices are
  /// nondecreasing; swapping two equal-size blocks is an isomorphism.
  bool equal_size_symmetry = true;
  /// Also prune inside the earlier free blocks when the rows still unfilled
  /// at the current column cannot supply the missing (t+1)-tuples.
  bool lookahead = false;
  /// Skip multisets whose libraries are missing instead of failing.
  bool allow_partial = false;
  ProgressFn progress;
  double progress_interval = 0;
};

struct SearchCounters {
  std::uint64_t tuples = 0;
  std::uint64_t nodes = 0;           ///< column placements tried
  std::uint64_t juxtapositions = 0;  ///< arrays J completed past the guard
  std::uint64_t coverage_prunes = 0;
  std::uint64_t lookahead_prunes = 0;
  std::uint64_t emitted = 0;  ///< completed arrays that verified (before dedup)

  SearchCounters& operator+=(const SearchCounters& o);
  friend bool operator==(const SearchCounters&, const SearchCounters&) = default;
};

struct TupleStats {
  int multiset = 0;          ///< index into SearchResultSet::multisets
  std::vector<int> members;  ///< library index of each block
  SearchCounters counters;
};

struct SearchStats {
  SearchCounters total;
  std::vector<SearchCounters> per_multiset;  ///< parallel to multisets
  std::vector<TupleStats> per_tuple;
  double seconds = 0;
};

/// Thread-safe set of class minima keyed by lex vector.
class ResultCollector {
 public:
  /// Returns true if the form was new.
  bool insert(CanonicalForm form);
  std::vector<CanonicalForm> sorted() const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<LexVector, CanonicalForm> forms_;
};

/// Search state for one tuple (A_0, ..., A_{v-1}) of CA(N_i; t, k, v). Block
/// A_0 is fixed; free block i receives, column by column, relabeled columns
/// of A_i. Column r is filled in blocks 1..v-1 before column r+1.
class Juxtaposer {
 public:
  /// All blocks must share t, k and v; the tuple has exactly v blocks.
  Juxtaposer(std::vector<CoveringArray> tuple, const SearchOptions& options, ResultCollector& sink,
             BudgetGuard* guard = nullptr);

  /// Explores every juxtaposition: extend_column(1, 0).
  void run();

  /// Explores only the juxtapositions whose first column of free block 1 is
  /// relabeling `relabeling` of column `column` of A_1.
  void run_first(int column, int relabeling);

  /// Tries every unassigned column of A_i, under every relabeling (in
  /// SymbolPermutation::all order), as column r of free block i.
  void extend_column(int i, int r);

  /// Candidate values for column r of free block i in the current state:
  /// (unassigned source columns) * v!.
  int candidates(int i) const;

  const SearchCounters& counters() const noexcept { return counters_; }
  /// Placements tried at each column index, summed over the free blocks.
  std::span<const std::uint64_t> column_nodes() const noexcept { return column_nodes_; }
  std::span<const int> sizes() const noexcept { return sizes_; }

 private:
  using Word = std::uint64_t;

  void enter_column(int r);
  void try_choice(int i, int r, int j, int p);
  void place(int i, int r, int j, int p);
  bool coverage_ok(int r) const;
  bool lookahead_ok(int i, int r) const;
  void emit();
  bool tick();
  void flush();

  const Word* raw(int i, int j, int x) const;
  Word* acc(int r, int i, int y);
  const Word* acc(int r, int i, int y) const;

  std::vector<CoveringArray> blocks_;
  SearchOptions options_;
  ResultCollector& sink_;
  BudgetGuard* guard_;
  int v_, k_, t_, n_, words_, perm_count_;
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  std::vector<SymbolPermutation> perms_;
  std::vector<std::vector<Symbol>> inverse_;  // inverse_[p][y] = x with perms_[p](x) == y
  std::vector<Word> raw_;                      // [(i * k + j) * v + x] rows holding x
  std::vector<Word> acc_;
  std::vector<Word> rest_;                        // rows of blocks > i, per i
  std::vector<std::vector<Word>> intersections_;  // per column r: t-subset x tuple masks
  std::vector<char> assigned_;                    // [i * k + j]
  std::vector<std::pair<int, int>> choice_;       // [i * k + r] -> (source column, relabeling)
  SearchCounters counters_;
  std::vector<std::uint64_t> column_nodes_;
  std::uint64_t pending_ = 0;
  bool stopped_ = false;
};

/// Runs the juxtaposition search for one tuple and returns its counters.
SearchCounters generate_juxtapositions(std::span<const CoveringArray> tuple, ResultCollector& sink,
                                       const SearchOptions& options = {});

/// Libraries of CA(N_i; t, k, v), keyed by N_i.
using LibraryMap = std::map<int, CaLibrary>;

struct SearchResultSet {
  Params target;
  std::vector<ValidMultiset> multisets;
  std::vector<CanonicalForm> members;
  SearchStats stats;
  bool libraries_complete = true;
  std::vector<int> missing_sizes;
};

/// Decides CA(N; t', k', v) by juxtaposing every tuple of non-isomorphic
/// CA(N_i; t'-1, k'-1, v) over every valid multiset. With complete
/// libraries an empty member list proves nonexistence.
/// Throws MissingLibrary when a required size is absent (unless
/// allow_partial), BudgetExhausted when a budget runs out, and
/// std::invalid_argument on inconsistent parameters or libraries.
SearchResultSet construct(int N, int t_prime, int k_prime, int v, const LibraryMap& libraries,
                          const SearchOptions& options = {});

/// Largest k in [t, k_limit] with probe(k) true (probes k = t, t+1, ... and
/// stops at the first false), 0 if probe(t) is false. Throws
/// std::length_error if the probe is still true at k_limit.
int cak(int N, int t, int v, const std::function<bool(int)>& probe, int k_limit = 64);

/// Existence oracle for cak: generates complete libraries of the blocks and
/// runs construct. Strength 1 is decided by the generator directly.
std::function<bool(int)> juxtaposition_probe(int N, int t, int v, GenerateOptions generate = {},
                                             SearchOptions search = {});

/// Existence oracle for cak that runs generate_distinct on CA(N; t, k, v)
/// itself. Much cheaper when k is large and N small.
std::function<bool(int)> generation_probe(int N, int t, int v, GenerateOptions generate = {});

}  // namespace cajux
