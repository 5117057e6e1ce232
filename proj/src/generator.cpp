#include "cajux/generator.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "cajux/combinations.hpp"
#include "canon_engine.hpp"

namespace cajux {

CaLibrary::CaLibrary(Params p, std::vector<CanonicalForm> members) : p_(p), members_(std::move(members)) {
  validate(p_);
  for (const auto& m : members_)
    if (m.array().params() != p_) throw std::invalid_argument("library member has different parameters");
  std::sort(members_.begin(), members_.end());
  for (std::size_t i = 1; i < members_.size(); ++i)
    if (members_[i].lex() == members_[i - 1].lex()) throw std::invalid_argument("library has duplicate members");
}

namespace {

class ResultSet {
 public:
  explicit ResultSet(Params p) : p_(p) {}

  void insert(const std::vector<Symbol>& cells) {
    CoveringArray a(p_, cells);
    auto lex = lex_vector(a);
    std::lock_guard lock(mutex_);
    found_.try_emplace(std::move(lex), std::move(a));
  }

  std::vector<CoveringArray> arrays() const {
    std::lock_guard lock(mutex_);
    std::vector<CoveringArray> out;
    for (const auto& [lex, a] : found_) out.push_back(a);
    return out;
  }

 private:
  Params p_;
  mutable std::mutex mutex_;
  std::map<LexVector, CoveringArray> found_;
};

// Column-major depth-first fill of an N x k array. Rows stay sorted because
// each column is nondecreasing inside every run of equal prefixes.
class OrderlyGenerator {
 public:
  OrderlyGenerator(const Params& p, BudgetGuard& guard, ResultSet& results, int split_cols,
                   std::vector<std::vector<Symbol>>* tasks)
      : p_(p),
        guard_(guard),
        results_(results),
        split_cols_(split_cols),
        tasks_(tasks),
        a_(static_cast<std::size_t>(p.N) * p.k, 0),
        frames_(p.k),
        perms_(all_perms(p.v)) {}

  ~OrderlyGenerator() { guard_.charge(pending_); }

  void run_from_scratch() {
    std::fill(a_.begin(), a_.end(), Symbol{0});
    if (setup_column(0)) fill(0, 0);
  }

  void run_from_prefix(const std::vector<Symbol>& cells, int cols) {
    a_ = cells;
    if (setup_column(cols)) fill(cols, 0);
  }

  std::uint64_t prefixes() const noexcept { return prefixes_; }

 private:
  struct Frame {
    int subsets = 0;
    std::vector<int> pattern;    // [subset * N + row]
    std::vector<int> remaining;  // [subset * patterns + pattern]
    std::vector<int> missing;    // [subset * patterns + pattern]
    std::vector<char> covered;   // [(subset * patterns + pattern) * v + symbol]
    std::vector<char> newly;     // [row * subsets + subset], for undo
    std::vector<int> run_start;  // first row of the run containing each row
    int patterns = 0;
  };

  static std::vector<std::vector<Symbol>> all_perms(int v) {
    std::vector<std::vector<Symbol>> out;
    for (const auto& p : SymbolPermutation::all(v)) out.emplace_back(p.mapping().begin(), p.mapping().end());
    return out;
  }

  Symbol& at(int r, int c) { return a_[static_cast<std::size_t>(r) * p_.k + c]; }

  detail::MatrixRef view(int cols) const { return {p_.N, cols, p_.v, p_.k, a_.data()}; }

  bool setup_column(int c) {
    Frame& f = frames_[c];
    const int n = p_.N, v = p_.v;
    const int s = std::min(c, p_.t - 1);
    f.patterns = static_cast<int>(power(v, s));
    f.subsets = static_cast<int>(binomial(c, s));
    f.pattern.assign(static_cast<std::size_t>(f.subsets) * n, 0);
    f.remaining.assign(static_cast<std::size_t>(f.subsets) * f.patterns, 0);
    f.missing.assign(f.remaining.size(), v);
    f.covered.assign(f.remaining.size() * v, 0);
    f.newly.assign(static_cast<std::size_t>(n) * f.subsets, 0);
    int idx = 0;
    for_each_combination(c, s, [&](std::span<const int> cols) {
      for (int r = 0; r < n; ++r) {
        int rank = 0;
        for (int col : cols) rank = rank * v + at(r, col);
        f.pattern[static_cast<std::size_t>(idx) * n + r] = rank;
        ++f.remaining[static_cast<std::size_t>(idx) * f.patterns + rank];
      }
      ++idx;
      return true;
    });
    for (int x : f.remaining)
      if (x < v) return false;
    f.run_start.assign(n, 0);
    for (int r = 1; r < n; ++r) {
      bool same = true;
      for (int col = 0; col < c && same; ++col) same = at(r, col) == at(r - 1, col);
      f.run_start[r] = same ? f.run_start[r - 1] : r;
    }
    return true;
  }

  bool tick() {
    if (++pending_ >= 4096) {
      guard_.charge(pending_);
      pending_ = 0;
    }
    return !guard_.stopped();
  }

  // Relabeling part of the partial-minimum test for column c, rows [0, r].
  bool relabel_ok(int c, int r) {
    const Frame& f = frames_[c];
    for (std::size_t p = 1; p < perms_.size(); ++p) {
      const auto& perm = perms_[p];
      int s = 0;
      while (s <= r) {
        int e = s + 1;
        while (e < p_.N && f.run_start[e] == s) ++e;
        const int stop = std::min(e, r + 1);
        z_.clear();
        for (int row = s; row < stop; ++row) z_.push_back(perm[at(row, c)]);
        std::sort(z_.begin(), z_.end());
        int cmp = 0;
        for (int i = 0; i < stop - s && cmp == 0; ++i) {
          const Symbol x = at(s + i, c);
          if (z_[i] != x) cmp = z_[i] < x ? -1 : 1;
        }
        if (cmp < 0) return false;
        if (cmp > 0 || stop < e) break;
        s = e;
      }
    }
    return true;
  }

  bool not_below_previous(int c, int r) {
    if (c == 0) return true;
    for (int row = 0; row <= r; ++row) {
      const Symbol x = at(row, c), y = at(row, c - 1);
      if (x != y) return x > y;
    }
    return true;
  }

  void fill(int c, int r) {
    Frame& f = frames_[c];
    const int n = p_.N, v = p_.v;
    const Symbol lo = (r > 0 && f.run_start[r] != r) ? at(r - 1, c) : Symbol{0};
    for (int y = lo; y < v; ++y) {
      if (!tick()) return;
      at(r, c) = static_cast<Symbol>(y);
      bool ok = true;
      for (int s = 0; s < f.subsets; ++s) {
        const std::size_t slot = static_cast<std::size_t>(s) * f.patterns + f.pattern[static_cast<std::size_t>(s) * n + r];
        --f.remaining[slot];
        char& cov = f.covered[slot * v + y];
        char& newly = f.newly[static_cast<std::size_t>(r) * f.subsets + s];
        newly = !cov;
        if (newly) {
          cov = 1;
          --f.missing[slot];
        }
        if (f.missing[slot] > f.remaining[slot]) ok = false;
      }
      ok = ok && not_below_previous(c, r) && relabel_ok(c, r);
      if (ok) {
        if (r + 1 < n)
          fill(c, r + 1);
        else
          column_done(c);
      }
      for (int s = 0; s < f.subsets; ++s) {
        const std::size_t slot = static_cast<std::size_t>(s) * f.patterns + f.pattern[static_cast<std::size_t>(s) * n + r];
        ++f.remaining[slot];
        if (f.newly[static_cast<std::size_t>(r) * f.subsets + s]) {
          f.covered[slot * v + y] = 0;
          ++f.missing[slot];
        }
      }
      if (guard_.stopped()) break;
    }
    at(r, c) = 0;
  }

  void column_done(int c) {
    if (c > 0 && !detail::is_minimum(view(c + 1))) return;
    ++prefixes_;
    if (c + 1 == p_.k) {
      results_.insert(a_);
      guard_.note_found();
    } else if (tasks_ && c + 1 == split_cols_) {
      tasks_->push_back(a_);
    } else if (setup_column(c + 1)) {
      fill(c + 1, 0);
    }
  }

  Params p_;
  BudgetGuard& guard_;
  ResultSet& results_;
  int split_cols_;
  std::vector<std::vector<Symbol>>* tasks_;
  std::vector<Symbol> a_;
  std::vector<Frame> frames_;
  std::vector<std::vector<Symbol>> perms_;
  std::vector<Symbol> z_;
  std::uint64_t pending_ = 0;
  std::uint64_t prefixes_ = 0;
};

}  // namespace

CaLibrary generate_distinct(const Params& p, const GenerateOptions& options, GenerationStats* stats) {
  validate(p);
  if (options.workers < 1) throw std::invalid_argument("worker count must be at least 1");
  BudgetGuard guard(options.budget, options.progress, options.progress_interval);
  ResultSet results(p);
  std::uint64_t prefixes = 0;

  if (power(p.v, p.t) <= p.N) {
    constexpr int split = 2;
    if (options.workers == 1 || p.k <= split) {
      OrderlyGenerator gen(p, guard, results, 0, nullptr);
      gen.run_from_scratch();
      prefixes += gen.prefixes();
    } else {
      std::vector<std::vector<Symbol>> tasks;
      {
        OrderlyGenerator head(p, guard, results, split, &tasks);
        head.run_from_scratch();
        prefixes += head.prefixes();
      }
      std::atomic<std::size_t> next{0};
      std::vector<std::uint64_t> worker_prefixes(options.workers, 0);
      std::vector<std::exception_ptr> errors(options.workers);
      std::vector<std::thread> pool;
      for (int w = 0; w < options.workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            OrderlyGenerator gen(p, guard, results, 0, nullptr);
            for (std::size_t i; (i = next.fetch_add(1)) < tasks.size() && !guard.stopped();)
              gen.run_from_prefix(tasks[i], split);
            worker_prefixes[w] = gen.prefixes();
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
      for (auto x : worker_prefixes) prefixes += x;
    }
  }

  if (stats) *stats = {guard.nodes(), prefixes, guard.elapsed()};
  if (guard.stopped())
    throw BudgetExhausted("generation budget exhausted", guard.nodes(), guard.elapsed(), results.arrays());

  std::vector<CanonicalForm> members;
  for (auto& a : results.arrays()) members.push_back(CanonicalForm::trusted(std::move(a)));
  return CaLibrary(p, std::move(members));
}

}  // namespace cajux
