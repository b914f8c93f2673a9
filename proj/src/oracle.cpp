#include "vivipar/oracle.hpp"

#include <cstdint>
#include <string>

namespace vivipar {

bool verify_model(const Formula& formula, const std::vector<bool>& model) {
  if (formula.trivially_unsat) return false;
  if (model.size() < formula.num_vars + 1) return false;
  for (const LitVec& clause : formula.clauses) {
    bool satisfied = false;
    for (Lit l : clause) {
      if (model[l.var()] != l.negated()) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) return false;
  }
  return true;
}

namespace {

// Bit v-1 of an assignment word holds variable v.
struct ClauseMask {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;

  [[nodiscard]] bool satisfied(std::uint32_t assignment) const {
    return ((assignment & pos) | (~assignment & neg)) != 0;
  }
};

std::vector<ClauseMask> masks_of(const std::vector<const LitVec*>& clauses) {
  std::vector<ClauseMask> masks;
  masks.reserve(clauses.size());
  for (const LitVec* clause : clauses) {
    ClauseMask m;
    for (Lit l : *clause) {
      const std::uint32_t bit = std::uint32_t{1} << (l.var() - 1);
      (l.negated() ? m.neg : m.pos) |= bit;
    }
    masks.push_back(m);
  }
  return masks;
}

void check_size(std::size_t num_vars) {
  if (num_vars > kBruteForceMaxVars) {
    throw TooLarge("brute force limited to " + std::to_string(kBruteForceMaxVars) + " variables, got " +
                   std::to_string(num_vars));
  }
}

// Enumerates the subsets of `free` on top of `fixed`; returns the first
// assignment satisfying every mask, or nothing.
bool search(const std::vector<ClauseMask>& masks, std::uint32_t fixed, std::uint32_t free, std::uint32_t& found) {
  std::size_t hot = 0;  // clause that failed last; checked first
  std::uint32_t sub = 0;
  for (;;) {
    const std::uint32_t a = fixed | sub;
    bool ok = masks.empty() || masks[hot].satisfied(a);
    if (ok) {
      for (std::size_t i = 0; i < masks.size(); ++i) {
        if (!masks[i].satisfied(a)) {
          hot = i;
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      found = a;
      return true;
    }
    if (sub == free) return false;
    sub = ((sub | ~free) + 1) & free;
  }
}

std::vector<const LitVec*> clause_ptrs(const Formula& formula) {
  std::vector<const LitVec*> out;
  for (const LitVec& c : formula.clauses) out.push_back(&c);
  return out;
}

}  // namespace

BruteForceResult brute_force(const Formula& formula) {
  check_size(formula.num_vars);
  BruteForceResult result;
  if (formula.trivially_unsat) return result;
  const auto masks = masks_of(clause_ptrs(formula));
  const std::uint32_t all =
      formula.num_vars == 0 ? 0 : static_cast<std::uint32_t>((std::uint64_t{1} << formula.num_vars) - 1);
  std::uint32_t found = 0;
  if (!search(masks, 0, all, found)) return result;
  result.sat = true;
  result.model.assign(formula.num_vars + 1, false);
  for (Var v = 1; v <= formula.num_vars; ++v) result.model[v] = ((found >> (v - 1)) & 1u) != 0;
  return result;
}

bool implied(const Formula& formula, const LitVec& clause) { return implied(formula, {}, clause); }

bool implied(const Formula& formula, const std::vector<LitVec>& extra, const LitVec& clause) {
  check_size(formula.num_vars);
  if (formula.trivially_unsat) return true;
  std::uint32_t fixed = 0;
  std::uint32_t fixed_vars = 0;
  for (Lit l : clause) {
    const std::uint32_t bit = std::uint32_t{1} << (l.var() - 1);
    const bool falsifying_value = l.negated();  // makes the literal false
    if ((fixed_vars & bit) != 0 && (((fixed & bit) != 0) != falsifying_value)) return true;  // tautology
    fixed_vars |= bit;
    if (falsifying_value) fixed |= bit;
  }
  std::vector<const LitVec*> all = clause_ptrs(formula);
  for (const LitVec& c : extra) all.push_back(&c);
  const auto masks = masks_of(all);
  const std::uint32_t every =
      formula.num_vars == 0 ? 0 : static_cast<std::uint32_t>((std::uint64_t{1} << formula.num_vars) - 1);
  std::uint32_t witness = 0;
  return !search(masks, fixed, every & ~fixed_vars, witness);
}

}  // namespace vivipar
