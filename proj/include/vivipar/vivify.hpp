#pragma once

#include <cstdint>
#include <vector>

#include "vivipar/engine.hpp"

namespace vivipar {

enum class VivifyKind { Unchanged, Shortened, ConflictReplaced, Satisfied };

const char* to_string(VivifyKind kind);

struct VivifyOutcome {
  VivifyKind kind = VivifyKind::Unchanged;
  LitVec lits;  // replacement for Shortened / ConflictReplaced
  std::uint64_t propagations_used = 0;
  bool aborted = false;  // propagation budget exhausted

  [[nodiscard]] bool success() const {
    return kind == VivifyKind::Shortened || kind == VivifyKind::ConflictReplaced;
  }
};

/// Which learned clauses are worth vivifying before a reduction.
struct CandidatePolicy {
  std::uint32_t max_lbd = 5;
  bool lowest_half = true;
  bool require_not_attempted = true;
  bool exclude_imported = true;
};

/// Orders live learned clauses by (LBD ascending, activity descending), keeps
/// the lowest half, then drops clauses over the LBD cap, already-attempted
/// clauses and (optionally) imported ones.
std::vector<ClauseRef> select_candidates(const Engine& engine, const CandidatePolicy& policy);

inline constexpr std::uint64_t kDefaultVivifyBudget = 1'000'000;

/// Strengthens `cref` by assuming the negation of its literals one at a time
/// at decision level 0. The clause itself is ignored by propagation while
/// probing, and every assumption is undone before returning. Marks the clause
/// as attempted. Does not modify the database; see apply_outcome.
VivifyOutcome vivify_clause(Engine& engine, ClauseRef cref, std::uint64_t propagation_budget = kDefaultVivifyBudget);

/// Installs the outcome: Shortened/ConflictReplaced replace the clause (units
/// are asserted at level 0), Satisfied removes it, Unchanged leaves it.
/// Counts the attempt and any success. Returns the clause's handle afterwards,
/// kNoClause when it no longer exists as a stored clause.
ClauseRef apply_outcome(Engine& engine, ClauseRef cref, const VivifyOutcome& outcome);

}  // namespace vivipar
