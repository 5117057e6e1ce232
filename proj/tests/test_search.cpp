#include <doctest.h>

#include <stdexcept>

#include <random>
#include <sstream>

#include "cajux/coverage.hpp"
#include "cajux/errors.hpp"
#include "cajux/search.hpp"
#include "cajux/store.hpp"
#include "cajux/transform.hpp"
#include "oracle.hpp"

using namespace cajux;

namespace {

LibraryMap libraries_for(int N, int t_prime, int k_prime, int v) {
  LibraryMap libs;
  for (const auto& m : valid_multisets(N, t_prime - 1, k_prime - 1, v))
    for (int size : m.sizes)
      if (!libs.count(size)) libs.emplace(size, generate_distinct(Params{size, t_prime - 1, k_prime - 1, v}));
  return libs;
}

std::vector<LexVector> lexes(std::span<const CanonicalForm> forms) {
  std::vector<LexVector> out;
  for (const auto& f : forms) out.push_back(f.lex());
  return out;
}

long long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

const std::vector<Params> kTiny{{4, 2, 3, 2}, {5, 2, 4, 2}, {6, 2, 4, 2}, {6, 2, 5, 2}, {8, 3, 4, 2},
                                 {8, 2, 5, 2}, {9, 2, 3, 3}, {10, 2, 3, 3}};

}  // namespace

TEST_CASE("construct matches brute force on tiny targets") {
  for (const Params& p : {Params{4, 2, 3, 2}, Params{5, 2, 4, 2}, Params{6, 2, 4, 2}, Params{6, 2, 3, 2},
                          Params{8, 3, 3, 2}}) {
    CAPTURE(p.N);
    CAPTURE(p.k);
    const auto r = construct(p.N, p.t, p.k, p.v, libraries_for(p.N, p.t, p.k, p.v));
    CHECK(lexes(r.members) == lexes(brute_force_distinct(p).members()));
  }
}

TEST_CASE("construct results are sound") {
  for (const Params& p : kTiny) {
    CAPTURE(p.N);
    CAPTURE(p.k);
    CAPTURE(p.v);
    const auto libs = libraries_for(p.N, p.t, p.k, p.v);
    const auto r = construct(p.N, p.t, p.k, p.v, libs);
    for (std::size_t i = 0; i < r.members.size(); ++i) {
      const auto& a = r.members[i].array();
      CHECK(a.params() == p);
      CHECK(oracle::covers(a, p.t));
      CHECK(canonical_minimum(a) == r.members[i]);
      if (i) CHECK(r.members[i - 1] < r.members[i]);
      // some column splits the array into blocks found in the libraries
      bool decomposes = false;
      for (int c = 0; c < p.k && !decomposes; ++c) {
        std::vector<Symbol> cells;
        for (int row = 0; row < a.rows(); ++row) {
          for (int j = 0; j < p.k; ++j)
            if (j != c) cells.push_back(a(row, j));
          cells.push_back(a(row, c));
        }
        auto split = split_by_last_column(CoveringArray(p, cells));
        bool all = true;
        for (const auto& b : split.blocks) {
          if (!b || !libs.count(b->rows())) {
            all = false;
            break;
          }
          const auto& members = libs.at(b->rows()).members();
          all = all && std::find(members.begin(), members.end(), canonical_minimum(*b)) != members.end();
        }
        decomposes = all;
      }
      CHECK(decomposes);
    }
  }
}

TEST_CASE("construct on small binary targets") {
  const auto r8 = construct(8, 3, 4, 2, libraries_for(8, 3, 4, 2));
  CHECK_FALSE(r8.members.empty());
  // no valid multiset: libraries are never consulted
  const auto r7 = construct(7, 3, 4, 2, LibraryMap{});
  CHECK(r7.multisets.empty());
  CHECK(r7.members.empty());
  CHECK(r7.libraries_complete);
  CHECK_THROWS_AS(construct(8, 1, 4, 2, LibraryMap{}), std::invalid_argument);
}

TEST_CASE("missing libraries") {
  CHECK_THROWS_AS(construct(8, 3, 4, 2, LibraryMap{}), MissingLibrary);
  try {
    construct(9, 3, 4, 2, LibraryMap{});
  } catch (const MissingLibrary& e) {
    CHECK(e.sizes() == std::vector<int>{4, 5});
    CHECK(e.strength() == 2);
    CHECK(e.columns() == 3);
  }
  SearchOptions partial;
  partial.allow_partial = true;
  LibraryMap only4;
  only4.emplace(4, generate_distinct(Params{4, 2, 3, 2}));
  const auto r = construct(9, 3, 4, 2, only4, partial);
  CHECK_FALSE(r.libraries_complete);
  CHECK(r.missing_sizes == std::vector<int>{5});

  LibraryMap wrong;
  wrong.emplace(4, generate_distinct(Params{4, 2, 2, 2}));
  CHECK_THROWS_AS(construct(8, 3, 4, 2, wrong), std::invalid_argument);
}

TEST_CASE("two copies of the one-column-pair array give every CA(4;2,3,2)") {
  const auto lib = generate_distinct(Params{2, 1, 2, 2});
  REQUIRE(lib.size() == 1);
  const std::vector<CoveringArray> tuple{lib.members()[0].array(), lib.members()[0].array()};
  ResultCollector sink;
  generate_juxtapositions(tuple, sink);
  CHECK(lexes(sink.sorted()) == lexes(brute_force_distinct(Params{4, 2, 3, 2}).members()));
}

TEST_CASE("leaf and candidate counts without pruning") {
  SearchOptions off;
  off.coverage_guard = false;
  for (const Params& block : {Params{2, 1, 2, 2}, Params{3, 1, 2, 3}, Params{4, 1, 3, 2}, Params{2, 1, 3, 2}}) {
    const int k = block.k, v = block.v;
    const auto lib = generate_distinct(block);
    std::vector<CoveringArray> tuple(v, lib.members()[0].array());
    ResultCollector sink;
    Juxtaposer state(tuple, off, sink);
    CHECK(state.candidates(1) == k * static_cast<int>(factorial(v)));
    state.run();
    // leaves: prod over free blocks of k! (v!)^k
    long long per_block = factorial(k);
    for (int c = 0; c < k; ++c) per_block *= factorial(v);
    long long leaves = 1;
    for (int i = 1; i < v; ++i) leaves *= per_block;
    CHECK(state.counters().juxtapositions == static_cast<std::uint64_t>(leaves));
    // column r offers (k - r) v! values to each free block
    long long before = 1;
    for (int r = 0; r < k; ++r) {
      const long long choices = (k - r) * factorial(v);
      long long expected = 0, run = before;
      for (int i = 1; i < v; ++i) {
        run *= choices;
        expected += run;
      }
      CHECK(state.column_nodes()[r] == static_cast<std::uint64_t>(expected));
      before = run;
    }
    CHECK(sink.size() <= static_cast<std::size_t>(leaves));
  }
  // v = 2, k = 2: 2! (2!)^2 leaves
  const auto lib = generate_distinct(Params{2, 1, 2, 2});
  ResultCollector sink;
  const std::vector<CoveringArray> pair{lib.members()[0].array(), lib.members()[0].array()};
  CHECK(generate_juxtapositions(pair, sink, off).juxtapositions == 8);
}

TEST_CASE("the guard only acts from column t on") {
  // blocks of strength 2: columns 0 and 1 see the same placements with and
  // without the guard
  const auto lib = generate_distinct(Params{4, 2, 3, 2});
  const std::vector<CoveringArray> tuple{lib.members()[0].array(), lib.members()[0].array()};
  SearchOptions on, off;
  off.coverage_guard = false;
  ResultCollector s1, s2;
  Juxtaposer guarded(tuple, on, s1), open(tuple, off, s2);
  guarded.run();
  open.run();
  CHECK(guarded.column_nodes()[0] == open.column_nodes()[0]);
  CHECK(guarded.column_nodes()[1] == open.column_nodes()[1]);
  CHECK(guarded.column_nodes()[2] == open.column_nodes()[2]);
  CHECK(guarded.counters().coverage_prunes > 0);
  CHECK(guarded.counters().nodes <= open.counters().nodes);
  CHECK(lexes(s1.sorted()) == lexes(s2.sorted()));
}

TEST_CASE("pruning and symmetry switches never change the member set") {
  for (const Params& p : kTiny) {
    CAPTURE(p.N);
    CAPTURE(p.k);
    CAPTURE(p.v);
    const auto libs = libraries_for(p.N, p.t, p.k, p.v);
    const auto base = lexes(construct(p.N, p.t, p.k, p.v, libs).members);
    SearchOptions look;
    look.lookahead = true;
    CHECK(lexes(construct(p.N, p.t, p.k, p.v, libs, look).members) == base);
    SearchOptions ordered;
    ordered.equal_size_symmetry = false;
    const auto full = construct(p.N, p.t, p.k, p.v, libs, ordered);
    CHECK(lexes(full.members) == base);
    if (p.N * p.k <= 20) {
      SearchOptions unguarded;
      unguarded.coverage_guard = false;
      CHECK(lexes(construct(p.N, p.t, p.k, p.v, libs, unguarded).members) == base);
    }
  }
}

TEST_CASE("equal-size symmetry visits nondecreasing index tuples") {
  for (const Params& p : {Params{8, 2, 4, 2}, Params{12, 2, 3, 3}}) {
    const auto libs = libraries_for(p.N, p.t, p.k, p.v);
    const auto r = construct(p.N, p.t, p.k, p.v, libs);
    for (const auto& ts : r.stats.per_tuple) {
      const auto& sizes = r.multisets[ts.multiset].sizes;
      for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] == sizes[i - 1]) CHECK(ts.members[i - 1] <= ts.members[i]);
    }
    SearchOptions ordered;
    ordered.equal_size_symmetry = false;
    const auto all = construct(p.N, p.t, p.k, p.v, libs, ordered);
    CHECK(all.stats.total.tuples > r.stats.total.tuples);
    CHECK(lexes(all.members) == lexes(r.members));
  }
}

TEST_CASE("statistics add up") {
  const auto libs = libraries_for(10, 2, 3, 3);
  const auto r = construct(10, 2, 3, 3, libs);
  SearchCounters sum;
  for (const auto& c : r.stats.per_multiset) sum += c;
  CHECK(sum == r.stats.total);
  CHECK(r.stats.total.tuples == r.stats.per_tuple.size());
  CHECK(r.stats.total.emitted >= r.members.size());
}

TEST_CASE("worker count does not change results") {
  for (const Params& p : {Params{10, 2, 3, 3}, Params{8, 2, 5, 2}, Params{5, 2, 4, 2}}) {
    const auto libs = libraries_for(p.N, p.t, p.k, p.v);
    std::string first;
    SearchCounters counters;
    for (int w : {1, 2, 8}) {
      SearchOptions o;
      o.workers = w;
      const auto r = construct(p.N, p.t, p.k, p.v, libs, o);
      std::string text;
      for (const auto& m : r.members) text += format_ca(m.array());
      if (w == 1) {
        first = text;
        counters = r.stats.total;
      }
      CHECK(text == first);
      CHECK(r.stats.total == counters);
    }
  }
}

TEST_CASE("search budget") {
  const auto libs = libraries_for(10, 2, 3, 3);
  SearchOptions o;
  o.budget.nodes = 10;
  CHECK_THROWS_AS(construct(10, 2, 3, 3, libs, o), BudgetExhausted);
}

TEST_CASE("cak") {
  CHECK(cak(4, 2, 2, juxtaposition_probe(4, 2, 2)) == 3);
  CHECK(cak(4, 2, 2, generation_probe(4, 2, 2)) == 3);
  // brute force: no CA(4;2,4,2), one class of CA(4;2,3,2)
  CHECK(brute_force_distinct(Params{4, 2, 4, 2}).empty());
  CHECK_FALSE(brute_force_distinct(Params{4, 2, 3, 2}).empty());
  CHECK(cak(6, 2, 2, generation_probe(6, 2, 2)) == 10);
  CHECK(cak(5, 2, 2, juxtaposition_probe(5, 2, 2)) == cak(5, 2, 2, generation_probe(5, 2, 2)));
  CHECK(cak(8, 3, 2, juxtaposition_probe(8, 3, 2)) == 4);
  CHECK(cak(9, 2, 3, generation_probe(9, 2, 3)) == 4);
  CHECK(cak(3, 2, 2, generation_probe(3, 2, 2)) == 0);
  CHECK_THROWS_AS(cak(2, 1, 2, generation_probe(2, 1, 2), 6), std::length_error);
}
