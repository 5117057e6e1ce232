// Core acceptance criteria: one PASS/FAIL line each, nonzero exit on any FAIL.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cajux/bounds.hpp"
#include "cajux/canonical.hpp"
#include "cajux/combinations.hpp"
#include "cajux/coverage.hpp"
#include "cajux/generator.hpp"
#include "cajux/search.hpp"
#include "cajux/store.hpp"
#include "cajux/transform.hpp"
#include "oracle.hpp"

using namespace cajux;

namespace {

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds, const std::function<bool(std::string&)>& body) {
  std::string detail;
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (ok && secs > limit_seconds) {
    ok = false;
    detail += " over time limit";
  }
  if (!ok) ++failures;
  std::printf("%s %2d %s (%.3f s, limit %.0f s)%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(), secs, limit_seconds,
              detail.empty() ? "" : ": ", detail.c_str());
  std::fflush(stdout);
}

CoveringArray load(const char* name) { return read_ca(std::filesystem::path(oracle::data_path(name))); }

LibraryMap libraries_for(int N, int t_prime, int k_prime, int v, int workers = 1) {
  GenerateOptions g;
  g.workers = workers;
  LibraryMap libs;
  for (const auto& m : valid_multisets(N, t_prime - 1, k_prime - 1, v))
    for (int size : m.sizes)
      if (!libs.count(size)) libs.emplace(size, generate_distinct(Params{size, t_prime - 1, k_prime - 1, v}, g));
  return libs;
}

std::string archive(const CaLibrary& lib) {
  std::ostringstream s;
  write_library(lib, s);
  return s.str();
}

std::string result_files(const SearchResultSet& r) {
  std::string s;
  for (const auto& m : r.members) s += format_ca(m.array());
  return s;
}

bool round_trip(const CoveringArray& a) {
  const int s = a.strength();
  const auto split = split_by_last_column(a);
  const auto blocks = present_blocks(split);
  for (const auto& b : blocks)
    if (!verify_strength(b, s - 1)) return false;
  return verify_strength(with_constant_column(vstack(blocks), split.sizes).with_strength(s), s);
}

}  // namespace

int main() {
  criterion(1, "54x9 reference array covers at strength 5, not 6", 1, [](std::string&) {
    const auto a = load("ca54.ca");
    return a.rows() == 54 && a.cols() == 9 && verify_strength(a, 5) && !verify_strength(a, 6);
  });

  criterion(2, "33x6 reference array covers at strength 3", 1, [](std::string&) {
    const auto a = load("ca33.ca");
    return a.rows() == 33 && a.cols() == 6 && a.order() == 3 && verify_strength(a, 3);
  });

  criterion(3, "split on the last column and reassemble", 60, [](std::string&) {
    return round_trip(load("ca54.ca")) && round_trip(load("ca33.ca"));
  });

  criterion(4, "orderly generation equals brute force for (4,2,3,2) and (2,1,2,2)", 60, [](std::string& d) {
    bool ok = true;
    for (const Params& p : {Params{4, 2, 3, 2}, Params{2, 1, 2, 2}}) {
      const auto g = generate_distinct(p);
      const auto b = brute_force_distinct(p);
      d += (d.empty() ? "" : ", ") + std::to_string(g.size()) + " vs " + std::to_string(b.size());
      ok = ok && g == b;
    }
    return ok;
  });

  criterion(5, "construct equals brute force for CA(4;2,3,2) and CA(5;2,4,2)", 600, [](std::string& d) {
    bool ok = true;
    for (const Params& p : {Params{4, 2, 3, 2}, Params{5, 2, 4, 2}}) {
      const auto r = construct(p.N, p.t, p.k, p.v, libraries_for(p.N, p.t, p.k, p.v));
      const auto b = brute_force_distinct(p);
      d += (d.empty() ? "" : ", ") + std::to_string(r.members.size()) + " vs " + std::to_string(b.size());
      ok = ok && std::equal(r.members.begin(), r.members.end(), b.members().begin(), b.members().end());
    }
    return ok;
  });

  criterion(6, "canonical minimum invariant and idempotent over 1000 scramblings", 600, [](std::string& d) {
    std::mt19937 rng(20260101);
    // {t, k, v, extra rows}
    const std::vector<std::array<int, 4>> shapes{{2, 3, 2, 0}, {2, 4, 2, 1}, {2, 5, 2, 2}, {3, 4, 2, 1}, {2, 3, 3, 0},
                                                 {2, 4, 3, 1}, {1, 5, 3, 3}, {2, 3, 4, 0}, {2, 6, 2, 0}, {1, 7, 2, 5}};
    int scrambles = 0;
    for (const auto& [t, k, v, extra] : shapes) {
      const auto a = oracle::random_ca(t, k, v, rng, extra);
      const auto form = canonical_minimum(a);
      if (!(canonical_minimum(form.array()) == form)) return false;
      for (int i = 0; i < 100; ++i, ++scrambles)
        if (!(canonical_minimum(oracle::scramble(a, rng)) == form)) return false;
    }
    d = std::to_string(shapes.size()) + " arrays, " + std::to_string(scrambles) + " scramblings";
    return scrambles >= 1000;
  });

  criterion(7, "CAN closed forms", 60, [](std::string& d) {
    auto exact = [](int t, int k, int v, long long expected) {
      const Bound b = can_bound(t, k, v);
      return b.kind == BoundKind::exact && b.value == expected;
    };
    int checked = 0;
    bool ok = true;
    for (int v = 2; v <= 5; ++v)
      for (int k = 1; k <= 10; ++k, ++checked) ok = ok && exact(1, k, v, v);
    for (int t = 1; t <= 4; ++t)
      for (int v = 2; v <= 5; ++v, ++checked) ok = ok && exact(t, t, v, power(v, t));
    for (int t = 1; t <= 6; ++t, checked += 2) ok = ok && exact(t, t + 1, 2, 1LL << t) && exact(t, t + 2, 2, (4LL << t) / 3);
    for (int k = 2; k <= 15; ++k, ++checked) {
      int n = 2;
      while (binomial(n - 1, (n + 1) / 2) < k) ++n;
      ok = ok && exact(2, k, 2, n);
    }
    d = std::to_string(checked) + " values";
    return ok;
  });

  criterion(8, "valid multisets (27,2,4,3) and (29,2,4,3)", 1, [](std::string&) {
    return valid_multisets(27, 2, 4, 3) == std::vector<ValidMultiset>{{{9, 9, 9}}} &&
           valid_multisets(29, 2, 4, 3) == std::vector<ValidMultiset>{{{9, 9, 11}}, {{9, 10, 10}}};
  });

  criterion(9, "archives and result files identical for 1, 2 and 8 workers", 600, [](std::string&) {
    std::vector<std::string> runs;
    for (int w : {1, 2, 8}) {
      GenerateOptions g;
      g.workers = w;
      SearchOptions s;
      s.workers = w;
      std::string all;
      for (const Params& p : {Params{4, 2, 3, 2}, Params{2, 1, 2, 2}}) all += archive(generate_distinct(p, g));
      for (const Params& p : {Params{4, 2, 3, 2}, Params{5, 2, 4, 2}})
        all += result_files(construct(p.N, p.t, p.k, p.v, libraries_for(p.N, p.t, p.k, p.v, w), s));
      runs.push_back(all);
    }
    return runs[0] == runs[1] && runs[1] == runs[2];
  });

  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
