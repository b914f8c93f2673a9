#include "vivipar/generator.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace vivipar {

Formula gen_random_3sat(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("random 3-SAT needs at least 3 variables");
  std::mt19937_64 rng(seed);
  Formula f;
  f.num_vars = n;
  f.clauses.reserve(m);
  while (f.clauses.size() < m) {
    LitVec clause;
    while (clause.size() < 3) {
      const auto v = static_cast<Var>(rng() % n + 1);
      bool fresh = true;
      for (Lit l : clause) fresh = fresh && l.var() != v;
      if (fresh) clause.push_back(Lit::make(v, (rng() & 1u) != 0));
    }
    f.clauses.push_back(normalize_clause(std::move(clause)).lits);
  }
  return f;
}

std::size_t phase_transition_clauses(std::size_t n) {
  return static_cast<std::size_t>(std::lround(4.26 * static_cast<double>(n)));
}

Formula pigeonhole(std::size_t pigeons, std::size_t holes) {
  Formula f;
  f.num_vars = pigeons * holes;
  if (holes == 0) {
    f.trivially_unsat = pigeons > 0;
    return f;
  }
  auto var = [holes](std::size_t p, std::size_t h) { return static_cast<Var>(p * holes + h + 1); };
  for (std::size_t p = 0; p < pigeons; ++p) {
    LitVec some;
    for (std::size_t h = 0; h < holes; ++h) some.push_back(Lit::positive(var(p, h)));
    f.clauses.push_back(normalize_clause(std::move(some)).lits);
  }
  for (std::size_t h = 0; h < holes; ++h) {
    for (std::size_t p = 0; p < pigeons; ++p) {
      for (std::size_t q = p + 1; q < pigeons; ++q) {
        f.clauses.push_back(normalize_clause({Lit::negative(var(p, h)), Lit::negative(var(q, h))}).lits);
      }
    }
  }
  return f;
}

}  // namespace vivipar
