#include "cajux/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "cajux/combinations.hpp"
#include "cajux/coverage.hpp"
#include "cajux/errors.hpp"
#include "cajux/transform.hpp"

namespace cajux {

SearchCounters& SearchCounters::operator+=(const SearchCounters& o) {
  tuples += o.tuples;
  nodes += o.nodes;
  juxtapositions += o.juxtapositions;
  coverage_prunes += o.coverage_prunes;
  lookahead_prunes += o.lookahead_prunes;
  emitted += o.emitted;
  return *this;
}

bool ResultCollector::insert(CanonicalForm form) {
  std::lock_guard lock(mutex_);
  auto key = form.lex();
  return forms_.try_emplace(std::move(key), std::move(form)).second;
}

std::vector<CanonicalForm> ResultCollector::sorted() const {
  std::lock_guard lock(mutex_);
  std::vector<CanonicalForm> out;
  out.reserve(forms_.size());
  for (const auto& [key, form] : forms_) out.push_back(form);
  return out;
}

std::size_t ResultCollector::size() const {
  std::lock_guard lock(mutex_);
  return forms_.size();
}

// ---------------------------------------------------------------------------

Juxtaposer::Juxtaposer(std::vector<CoveringArray> tuple, const SearchOptions& options, ResultCollector& sink,
                       BudgetGuard* guard)
    : blocks_(std::move(tuple)), options_(options), sink_(sink), guard_(guard) {
  if (blocks_.empty()) throw std::invalid_argument("juxtaposition needs at least one block");
  const Params& p0 = blocks_.front().params();
  v_ = p0.v;
  k_ = p0.k;
  t_ = p0.t;
  if (static_cast<int>(blocks_.size()) != v_)
    throw std::invalid_argument("juxtaposition needs one block per symbol");
  n_ = 0;
  for (const auto& b : blocks_) {
    if (b.strength() != t_ || b.cols() != k_ || b.order() != v_)
      throw std::invalid_argument("juxtaposed blocks must share t, k and v");
    offsets_.push_back(n_);
    sizes_.push_back(b.rows());
    n_ += b.rows();
  }
  words_ = (n_ + 63) / 64;
  perms_ = SymbolPermutation::all(v_);
  perm_count_ = static_cast<int>(perms_.size());
  for (const auto& p : perms_) {
    const auto inv = p.inverse();
    inverse_.emplace_back(inv.mapping().begin(), inv.mapping().end());
  }

  raw_.assign(static_cast<std::size_t>(v_) * k_ * v_ * words_, 0);
  for (int i = 0; i < v_; ++i)
    for (int row = 0; row < sizes_[i]; ++row) {
      const int g = offsets_[i] + row;
      for (int j = 0; j < k_; ++j) {
        Word* m = raw_.data() + ((static_cast<std::size_t>(i) * k_ + j) * v_ + blocks_[i](row, j)) * words_;
        m[g / 64] |= Word{1} << (g % 64);
      }
    }

  acc_.assign(static_cast<std::size_t>(k_) * v_ * v_ * words_, 0);
  for (int r = 0; r < k_; ++r)
    for (int y = 0; y < v_; ++y) std::copy_n(raw(0, r, y), words_, acc(r, 0, y));

  rest_.assign(static_cast<std::size_t>(v_) * words_, 0);
  for (int i = 0; i < v_; ++i)
    for (int b = i + 1; b < v_; ++b)
      for (int row = 0; row < sizes_[b]; ++row) {
        const int g = offsets_[b] + row;
        rest_[static_cast<std::size_t>(i) * words_ + g / 64] |= Word{1} << (g % 64);
      }

  intersections_.resize(k_);
  assigned_.assign(static_cast<std::size_t>(v_) * k_, 0);
  choice_.assign(static_cast<std::size_t>(v_) * k_, {-1, -1});
  column_nodes_.assign(k_, 0);
}

const Juxtaposer::Word* Juxtaposer::raw(int i, int j, int x) const {
  return raw_.data() + ((static_cast<std::size_t>(i) * k_ + j) * v_ + x) * words_;
}

Juxtaposer::Word* Juxtaposer::acc(int r, int i, int y) {
  return acc_.data() + ((static_cast<std::size_t>(r) * v_ + i) * v_ + y) * words_;
}

const Juxtaposer::Word* Juxtaposer::acc(int r, int i, int y) const {
  return acc_.data() + ((static_cast<std::size_t>(r) * v_ + i) * v_ + y) * words_;
}

int Juxtaposer::candidates(int i) const {
  int free = 0;
  for (int j = 0; j < k_; ++j) free += assigned_[static_cast<std::size_t>(i) * k_ + j] ? 0 : 1;
  return free * perm_count_;
}

void Juxtaposer::run() {
  extend_column(1, 0);
  flush();
}

void Juxtaposer::run_first(int column, int relabeling) {
  if (column < 0 || column >= k_ || relabeling < 0 || relabeling >= perm_count_)
    throw std::out_of_range("first choice out of range");
  enter_column(0);
  if (tick()) try_choice(1, 0, column, relabeling);
  flush();
}

// Rows of J, restricted to columns 0..r-1, that carry tuple x on the
// t-subset S, for every (S, x). Only needed once those columns are complete.
void Juxtaposer::enter_column(int r) {
  auto& masks = intersections_[r];
  masks.clear();
  if (r < t_ || t_ + 1 > k_) return;
  const int last = v_ - 1;
  std::vector<Word> scratch(static_cast<std::size_t>(t_ + 1) * words_);
  std::vector<int> x(t_);
  for_each_combination(r, t_, [&](std::span<const int> cols) {
    std::fill(x.begin(), x.end(), 0);
    while (true) {
      // prefix AND, level d holds the intersection of the first d columns
      std::fill_n(scratch.begin(), words_, ~Word{0});
      for (int d = 0; d < t_; ++d) {
        const Word* m = acc(cols[d], last, x[d]);
        for (int w = 0; w < words_; ++w)
          scratch[static_cast<std::size_t>(d + 1) * words_ + w] = scratch[static_cast<std::size_t>(d) * words_ + w] & m[w];
      }
      masks.insert(masks.end(), scratch.begin() + static_cast<std::ptrdiff_t>(t_) * words_,
                   scratch.begin() + static_cast<std::ptrdiff_t>(t_ + 1) * words_);
      int d = t_ - 1;
      while (d >= 0 && x[d] == v_ - 1) x[d--] = 0;
      if (d < 0) break;
      ++x[d];
    }
    return true;
  });
}

void Juxtaposer::extend_column(int i, int r) {
  if (stopped_) return;
  if (i == 1) enter_column(r);
  for (int j = 0; j < k_; ++j) {
    if (assigned_[static_cast<std::size_t>(i) * k_ + j]) continue;
    for (int p = 0; p < perm_count_; ++p) {
      if (!tick()) return;
      try_choice(i, r, j, p);
      if (stopped_) return;
    }
  }
}

void Juxtaposer::try_choice(int i, int r, int j, int p) {
  ++column_nodes_[r];
  place(i, r, j, p);
  const bool checkable = r >= t_ && t_ + 1 <= k_;
  if (i == v_ - 1) {
    if (options_.coverage_guard && checkable && !coverage_ok(r)) {
      ++counters_.coverage_prunes;
      return;
    }
  } else if (options_.lookahead && checkable && !lookahead_ok(i, r)) {
    ++counters_.lookahead_prunes;
    return;
  }
  const std::size_t slot = static_cast<std::size_t>(i) * k_;
  assigned_[slot + j] = 1;
  choice_[slot + r] = {j, p};
  if (i < v_ - 1)
    extend_column(i + 1, r);
  else if (r < k_ - 1)
    extend_column(1, r + 1);
  else
    emit();
  assigned_[slot + j] = 0;
}

void Juxtaposer::place(int i, int r, int j, int p) {
  const auto& inv = inverse_[p];
  for (int y = 0; y < v_; ++y) {
    const Word* prev = acc(r, i - 1, y);
    const Word* piece = raw(i, j, inv[y]);
    Word* out = acc(r, i, y);
    for (int w = 0; w < words_; ++w) out[w] = prev[w] | piece[w];
  }
}

bool Juxtaposer::coverage_ok(int r) const {
  const auto& masks = intersections_[r];
  const int last = v_ - 1;
  for (std::size_t m = 0; m < masks.size(); m += words_) {
    for (int y = 0; y < v_; ++y) {
      const Word* col = acc(r, last, y);
      Word hit = 0;
      for (int w = 0; w < words_; ++w) hit |= masks[m + w] & col[w];
      if (!hit) return false;
    }
  }
  return true;
}

// Every (S, x) row set must still be able to receive each symbol it lacks in
// column r; only rows of later blocks are unfilled.
bool Juxtaposer::lookahead_ok(int i, int r) const {
  const auto& masks = intersections_[r];
  const Word* rest = rest_.data() + static_cast<std::size_t>(i) * words_;
  for (std::size_t m = 0; m < masks.size(); m += words_) {
    int missing = 0;
    for (int y = 0; y < v_; ++y) {
      const Word* col = acc(r, i, y);
      Word hit = 0;
      for (int w = 0; w < words_; ++w) hit |= masks[m + w] & col[w];
      if (!hit) ++missing;
    }
    if (missing == 0) continue;
    int open = 0;
    for (int w = 0; w < words_; ++w) open += std::popcount(masks[m + w] & rest[w]);
    if (missing > open) return false;
  }
  return true;
}

void Juxtaposer::emit() {
  ++counters_.juxtapositions;
  std::vector<Symbol> cells(static_cast<std::size_t>(n_) * k_);
  for (int row = 0; row < sizes_[0]; ++row)
    for (int c = 0; c < k_; ++c) cells[static_cast<std::size_t>(row) * k_ + c] = blocks_[0](row, c);
  for (int i = 1; i < v_; ++i)
    for (int c = 0; c < k_; ++c) {
      const auto [j, p] = choice_[static_cast<std::size_t>(i) * k_ + c];
      for (int row = 0; row < sizes_[i]; ++row)
        cells[static_cast<std::size_t>(offsets_[i] + row) * k_ + c] = perms_[p](blocks_[i](row, j));
    }
  const CoveringArray j(Params{n_, std::min(t_ + 1, k_), k_, v_}, std::move(cells));
  const CoveringArray full = with_constant_column(j, sizes_).with_strength(t_ + 1);
  if (!verify_strength(full, t_ + 1)) return;
  ++counters_.emitted;
  if (sink_.insert(canonical_minimum(full)) && guard_) guard_->note_found();
}

bool Juxtaposer::tick() {
  ++counters_.nodes;
  if (guard_ && ++pending_ >= 4096) flush();
  return !stopped_;
}

void Juxtaposer::flush() {
  if (!guard_) return;
  if (!guard_->charge(pending_)) stopped_ = true;
  pending_ = 0;
}

SearchCounters generate_juxtapositions(std::span<const CoveringArray> tuple, ResultCollector& sink,
                                       const SearchOptions& options) {
  BudgetGuard guard(options.budget, options.progress, options.progress_interval);
  Juxtaposer state(std::vector<CoveringArray>(tuple.begin(), tuple.end()), options, sink, &guard);
  state.run();
  if (guard.stopped())
    throw BudgetExhausted("juxtaposition budget exhausted", guard.nodes(), guard.elapsed(), {});
  return state.counters();
}

// ---------------------------------------------------------------------------

namespace {

struct Task {
  int tuple;  // index into the tuple list
  int column;
  int relabeling;
};

struct TupleRef {
  int multiset;
  std::vector<int> members;
};

// Library indices for one multiset in lexicographic order; within a run of
// equal sizes the indices are nondecreasing when `symmetric` is set.
void enumerate_tuples(const std::vector<int>& sizes, const std::vector<int>& counts, bool symmetric, int multiset,
                      std::vector<TupleRef>& out) {
  const int v = static_cast<int>(sizes.size());
  for (int c : counts)
    if (c == 0) return;
  std::vector<int> idx(v, 0);
  while (true) {
    out.push_back({multiset, idx});
    int d = v - 1;
    while (d >= 0) {
      if (idx[d] + 1 < counts[d]) break;
      --d;
    }
    if (d < 0) return;
    ++idx[d];
    for (int e = d + 1; e < v; ++e) idx[e] = symmetric && sizes[e] == sizes[e - 1] ? idx[e - 1] : 0;
  }
}

}  // namespace

SearchResultSet construct(int N, int t_prime, int k_prime, int v, const LibraryMap& libraries,
                          const SearchOptions& options) {
  validate(Params{N, t_prime, k_prime, v});
  if (t_prime < 2) throw std::invalid_argument("construct needs strength t' >= 2");
  const auto start = std::chrono::steady_clock::now();
  const int t = t_prime - 1;
  const int k = k_prime - 1;

  SearchResultSet result;
  result.target = Params{N, t_prime, k_prime, v};
  result.multisets = valid_multisets(N, t, k, v);
  result.stats.per_multiset.resize(result.multisets.size());
  if (result.multisets.empty()) return result;

  // Resolve libraries before any work.
  std::vector<int> missing;
  std::vector<char> usable(result.multisets.size(), 1);
  for (std::size_t s = 0; s < result.multisets.size(); ++s)
    for (int size : result.multisets[s].sizes) {
      const auto it = libraries.find(size);
      if (it == libraries.end()) {
        usable[s] = 0;
        if (std::find(missing.begin(), missing.end(), size) == missing.end()) missing.push_back(size);
      } else if (!(it->second.params() == Params{size, t, k, v})) {
        throw std::invalid_argument("library for " + std::to_string(size) + " rows has wrong parameters");
      }
    }
  std::sort(missing.begin(), missing.end());
  if (!missing.empty()) {
    if (!options.allow_partial) throw MissingLibrary(missing, t, k, v);
    result.libraries_complete = false;
    result.missing_sizes = missing;
  }

  std::vector<TupleRef> tuples;
  for (std::size_t s = 0; s < result.multisets.size(); ++s) {
    if (!usable[s]) continue;
    const auto& sizes = result.multisets[s].sizes;
    std::vector<int> counts;
    for (int size : sizes) counts.push_back(static_cast<int>(libraries.at(size).size()));
    enumerate_tuples(sizes, counts, options.equal_size_symmetry, static_cast<int>(s), tuples);
  }

  const int first_choices = k * static_cast<int>(SymbolPermutation::all(v).size());
  std::vector<Task> tasks;
  tasks.reserve(tuples.size() * first_choices);
  for (int u = 0; u < static_cast<int>(tuples.size()); ++u)
    for (int j = 0; j < k; ++j)
      for (int p = 0; p < first_choices / k; ++p) tasks.push_back({u, j, p});

  result.stats.per_tuple.resize(tuples.size());
  for (std::size_t u = 0; u < tuples.size(); ++u) {
    result.stats.per_tuple[u].multiset = tuples[u].multiset;
    result.stats.per_tuple[u].members = tuples[u].members;
    result.stats.per_tuple[u].counters.tuples = 1;
  }

  ResultCollector sink;
  BudgetGuard guard(options.budget, options.progress, options.progress_interval);
  std::atomic<std::size_t> next{0};
  std::mutex stats_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    try {
      while (!guard.stopped()) {
        const std::size_t n = next.fetch_add(1);
        if (n >= tasks.size()) return;
        const Task& task = tasks[n];
        const TupleRef& ref = tuples[task.tuple];
        const auto& sizes = result.multisets[ref.multiset].sizes;
        std::vector<CoveringArray> blocks;
        for (int b = 0; b < v; ++b) blocks.push_back(libraries.at(sizes[b]).members()[ref.members[b]].array());
        Juxtaposer state(std::move(blocks), options, sink, &guard);
        state.run_first(task.column, task.relabeling);
        std::lock_guard lock(stats_mutex);
        auto& counters = result.stats.per_tuple[task.tuple].counters;
        const auto tuples_before = counters.tuples;
        counters += state.counters();
        counters.tuples = tuples_before;
      }
    } catch (...) {
      std::lock_guard lock(stats_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  const int workers = std::max(1, options.workers);
  if (workers == 1 || tasks.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& ts : result.stats.per_tuple) {
    result.stats.per_multiset[ts.multiset] += ts.counters;
    result.stats.total += ts.counters;
  }
  result.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (guard.stopped()) {
    std::vector<CoveringArray> partial;
    for (const auto& f : sink.sorted()) partial.push_back(f.array());
    throw BudgetExhausted("search budget exhausted", guard.nodes(), guard.elapsed(), std::move(partial));
  }
  result.members = sink.sorted();
  return result;
}

int cak(int N, int t, int v, const std::function<bool(int)>& probe, int k_limit) {
  for (int k = t; k <= k_limit; ++k)
    if (!probe(k)) return k == t ? 0 : k - 1;
  throw std::length_error("CA(" + std::to_string(N) + ";" + std::to_string(t) + "," + std::to_string(k_limit) + "," +
                          std::to_string(v) + ") still exists at the column limit");
}

std::function<bool(int)> juxtaposition_probe(int N, int t, int v, GenerateOptions generate, SearchOptions search) {
  return [=](int k) {
    if (t == 1) return !generate_distinct(Params{N, 1, k, v}, generate).empty();
    LibraryMap libraries;
    for (const auto& m : valid_multisets(N, t - 1, k - 1, v))
      for (int size : m.sizes)
        if (!libraries.count(size)) libraries.emplace(size, generate_distinct(Params{size, t - 1, k - 1, v}, generate));
    return !construct(N, t, k, v, libraries, search).members.empty();
  };
}

std::function<bool(int)> generation_probe(int N, int t, int v, GenerateOptions generate) {
  return [=](int k) { return !generate_distinct(Params{N, t, k, v}, generate).empty(); };
}

}  // namespace cajux
