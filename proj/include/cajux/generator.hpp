#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cajux/array.hpp"
#include "cajux/budget.hpp"
#include "cajux/canonical.hpp"

namespace cajux {

/// All pairwise non-isomorphic CA(N; t, k, v) for one parameter set, each
/// stored as its class minimum, sorted by lex vector.
class CaLibrary {
 public:
  /// Sorts the members. Throws std::invalid_argument if a member has other
  /// parameters or two members share a lex vector.
  explicit CaLibrary(Params p, std::vector<CanonicalForm> members = {});

  const Params& params() const noexcept { return p_; }
  std::span<const CanonicalForm> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  friend bool operator==(const CaLibrary&, const CaLibrary&) = default;

 private:
  Params p_;
  std::vector<CanonicalForm> members_;
};

struct GenerateOptions {
  int workers = 1;
  Budget budget;
  ProgressFn progress;
  double progress_interval = 0;
};

struct GenerationStats {
  std::uint64_t nodes = 0;
  std::uint64_t prefixes = 0;  ///< canonical column prefixes reached
  double seconds = 0;
};

/// Orderly generation of one class minimum per isomorphism class. Cells are
/// filled column by column, top to bottom, symbols ascending. A cell is kept
/// only if the rows stay sorted, the remaining rows can still cover every
/// missing tuple, and the partial array passes the partial-minimum test; a
/// completed column must leave the column prefix a class minimum.
/// Throws BudgetExhausted (with the members found so far) when a budget runs
/// out. Output is independent of the worker count.
CaLibrary generate_distinct(const Params& p, const GenerateOptions& options = {}, GenerationStats* stats = nullptr);

/// Test oracle: enumerates all v^(N k) arrays, keeps the covering ones and
/// buckets them by canonical_minimum. Refuses (std::invalid_argument) when
/// N k log2(v) exceeds 24 bits.
CaLibrary brute_force_distinct(const Params& p);

}  // namespace cajux
