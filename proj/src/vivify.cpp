#include "vivipar/vivify.hpp"

#include <algorithm>
#include <stdexcept>

namespace vivipar {

const char* to_string(VivifyKind kind) {
  switch (kind) {
    case VivifyKind::Unchanged: return "unchanged";
    case VivifyKind::Shortened: return "shortened";
    case VivifyKind::ConflictReplaced: return "conflict-replaced";
    case VivifyKind::Satisfied: return "satisfied";
  }
  return "?";
}

std::vector<ClauseRef> select_candidates(const Engine& engine, const CandidatePolicy& policy) {
  std::vector<ClauseRef> pool = engine.learned_clauses();
  std::stable_sort(pool.begin(), pool.end(), [&engine](ClauseRef a, ClauseRef b) {
    const ClauseMeta& ma = engine.clause(a).meta;
    const ClauseMeta& mb = engine.clause(b).meta;
    if (ma.lbd != mb.lbd) return ma.lbd < mb.lbd;
    return ma.activity > mb.activity;
  });
  if (policy.lowest_half) pool.resize(pool.size() / 2);
  std::erase_if(pool, [&](ClauseRef cref) {
    const ClauseMeta& m = engine.clause(cref).meta;
    return m.lbd > policy.max_lbd || (policy.require_not_attempted && m.vivify_attempted) ||
           (policy.exclude_imported && m.imported);
  });
  return pool;
}

namespace {

// Restores level 0 on every exit path.
class ProbeScope {
 public:
  ProbeScope(Engine& engine, ClauseRef ignored) : engine_(engine) { engine_.begin_probe(ignored); }
  ~ProbeScope() { engine_.end_probe(); }
  ProbeScope(const ProbeScope&) = delete;
  ProbeScope& operator=(const ProbeScope&) = delete;

 private:
  Engine& engine_;
};

}  // namespace

VivifyOutcome vivify_clause(Engine& engine, ClauseRef cref, std::uint64_t propagation_budget) {
  if (engine.decision_level() != 0) throw std::logic_error("vivification requires decision level 0");
  VivifyOutcome out;
  if (!engine.is_live(cref) || !engine.propagate_root()) return out;
  engine.meta(cref).vivify_attempted = true;

  const LitVec original = engine.clause(cref).lits;
  for (Lit l : original) {
    if (engine.value(l) == Value::True) {
      out.kind = VivifyKind::Satisfied;
      return out;
    }
  }

  const std::uint64_t start = engine.stats().propagations_total;
  {
    ProbeScope probe(engine, cref);
    LitVec kept;
    bool decided = false;
    for (Lit l : original) {
      const Value v = engine.value(l);
      if (v == Value::True) {
        // Implied by the negation of the prefix: the rest of the clause is redundant.
        kept.push_back(l);
        if (kept.size() < original.size()) {
          out.kind = VivifyKind::Shortened;
          out.lits = kept;
        }
        decided = true;
        break;
      }
      if (v == Value::False) continue;  // implied false: drop it
      engine.assume(~l);
      kept.push_back(l);
      const ClauseRef conflict = engine.propagate();
      if (engine.stats().propagations_total - start > propagation_budget) {
        out.aborted = true;
        decided = true;
        break;
      }
      if (conflict != kNoClause) {
        const LitVec decisions = engine.conflict_decisions(conflict);
        LitVec replacement;
        for (Lit o : original) {
          if (std::find(decisions.begin(), decisions.end(), o) != decisions.end()) replacement.push_back(o);
        }
        if (replacement.size() < original.size()) {
          out.kind = VivifyKind::ConflictReplaced;
          out.lits = std::move(replacement);
        }
        decided = true;
        break;
      }
    }
    if (!decided && kept.size() < original.size()) {
      out.kind = VivifyKind::Shortened;
      out.lits = std::move(kept);
    }
  }
  out.propagations_used = engine.stats().propagations_total - start;
  return out;
}

ClauseRef apply_outcome(Engine& engine, ClauseRef cref, const VivifyOutcome& outcome) {
  Stats& stats = engine.stats();
  ++stats.vivify_attempts;
  if (engine.tracing()) {
    const ClauseMeta& m = engine.clause(cref).meta;
    engine.emit({.kind = TraceKind::Attempted,
                 .clause_id = m.id,
                 .lits = engine.clause(cref).lits,
                 .lbd = m.lbd,
                 .learn_lbd = m.learn_lbd,
                 .vivify_attempted = true,
                 .reduce_protected = m.reduce_protected});
  }
  switch (outcome.kind) {
    case VivifyKind::Unchanged:
      return cref;
    case VivifyKind::Satisfied:
      engine.remove_clause(cref);
      return kNoClause;
    case VivifyKind::Shortened:
    case VivifyKind::ConflictReplaced:
      break;
  }
  const StoredClause& before = engine.clause(cref);
  ++stats.vivify_successes;
  stats.literals_removed += before.lits.size() - outcome.lits.size();
  if (engine.tracing()) {
    engine.emit({.kind = TraceKind::Vivified,
                 .clause_id = before.meta.id,
                 .lits = outcome.lits,
                 .before = before.lits,
                 .lbd = before.meta.lbd,
                 .learn_lbd = before.meta.learn_lbd,
                 .vivify_attempted = true,
                 .reduce_protected = before.meta.reduce_protected});
  }
  return engine.replace_clause(cref, outcome.lits);
}

}  // namespace vivipar
