#pragma once

#include <initializer_list>
#include <vector>

#include "vivipar/formula.hpp"
#include "vivipar/literal.hpp"

namespace testing {

inline vivipar::LitVec lits(std::vector<int> values) { return vivipar::from_dimacs(values); }

/// Builds a normalized formula from DIMACS-style clauses.
inline vivipar::Formula cnf(std::size_t num_vars, std::initializer_list<std::vector<int>> clauses) {
  vivipar::Formula f;
  f.num_vars = num_vars;
  for (const auto& c : clauses) {
    vivipar::NormalizedClause n = vivipar::normalize_clause(vivipar::from_dimacs(c));
    if (n.kind == vivipar::NormalizeKind::Empty) f.trivially_unsat = true;
    if (n.kind == vivipar::NormalizeKind::Clause) f.clauses.push_back(std::move(n.lits));
  }
  return f;
}

/// Same formula with variables renamed by `perm` (perm[v] is the new index).
inline vivipar::Formula rename(const vivipar::Formula& f, const std::vector<vivipar::Var>& perm) {
  vivipar::Formula g;
  g.num_vars = f.num_vars;
  g.trivially_unsat = f.trivially_unsat;
  for (const auto& c : f.clauses) {
    vivipar::LitVec r;
    for (vivipar::Lit l : c) r.push_back(vivipar::Lit::make(perm[l.var()], l.negated()));
    g.clauses.push_back(vivipar::normalize_clause(r).lits);
  }
  return g;
}

}  // namespace testing
