#include <cmath>
#include <map>
#include <stdexcept>

#include "cajux/coverage.hpp"
#include "cajux/generator.hpp"

namespace cajux {

CaLibrary brute_force_distinct(const Params& p) {
  validate(p);
  const double bits = static_cast<double>(p.N) * p.k * std::log2(static_cast<double>(p.v));
  if (bits > 24.0 + 1e-9) throw std::invalid_argument("brute force enumeration refused: more than 24 bits of state");
  const std::size_t cells = static_cast<std::size_t>(p.N) * p.k;
  const std::int64_t total = power(p.v, static_cast<int>(cells));

  std::map<LexVector, CanonicalForm> classes;
  std::vector<Symbol> digits(cells, 0);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    if (idx > 0) {
      for (std::size_t i = 0; i < cells; ++i) {
        if (++digits[i] < p.v) break;
        digits[i] = 0;
      }
    }
    CoveringArray a(p, digits);
    if (!verify_strength(a, p.t)) continue;
    auto canon = canonical_minimum(a);
    auto key = canon.lex();
    classes.try_emplace(std::move(key), std::move(canon));
  }
  std::vector<CanonicalForm> members;
  for (auto& [lex, c] : classes) members.push_back(std::move(c));
  return CaLibrary(p, std::move(members));
}

}  // namespace cajux
