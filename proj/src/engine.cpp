#include "vivipar/engine.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace vivipar {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::Unknown: return "UNKNOWN";
  }
  return "?";
}

void SearchHooks::on_learn(Engine&, ClauseRef, const LitVec&, std::uint32_t) {}
void SearchHooks::on_restart(Engine&) {}
void SearchHooks::before_reduce(Engine& engine) { engine.reduce_db(); }
void SearchHooks::on_decision_point(Engine&) {}

namespace {
SearchHooks& default_hooks() {
  static SearchHooks hooks;
  return hooks;
}
}  // namespace

// ---------------------------------------------------------------------------
// Variable heap

void Engine::VarHeap::reset(std::size_t num_vars) {
  heap_.clear();
  index_.assign(num_vars + 1, -1);
}

void Engine::VarHeap::insert(Var v) {
  index_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  sift_up(heap_.size() - 1);
}

void Engine::VarHeap::increased(Var v) {
  if (contains(v)) sift_up(static_cast<std::size_t>(index_[v]));
}

Var Engine::VarHeap::pop() {
  Var top = heap_.front();
  heap_.front() = heap_.back();
  index_[heap_.front()] = 0;
  heap_.pop_back();
  index_[top] = -1;
  if (!heap_.empty()) sift_down(0);
  return top;
}

void Engine::VarHeap::rebuild() {
  for (std::size_t i = heap_.size() / 2 + 1; i-- > 0;) sift_down(i);
}

void Engine::VarHeap::sift_up(std::size_t i) {
  Var v = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) / 2;
    if (!before(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    index_[heap_[i]] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  index_[v] = static_cast<int>(i);
}

void Engine::VarHeap::sift_down(std::size_t i) {
  if (heap_.empty()) return;
  Var v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && before(heap_[child + 1], heap_[child])) ++child;
    if (!before(heap_[child], v)) break;
    heap_[i] = heap_[child];
    index_[heap_[i]] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  index_[v] = static_cast<int>(i);
}

// ---------------------------------------------------------------------------
// Construction

Engine::Engine(const Formula& formula, EngineConfig config)
    : config_(config), num_vars_(formula.num_vars), restart_(config.restart) {
  if (!(config_.var_decay > 0.0 && config_.var_decay < 1.0)) throw std::invalid_argument("var_decay must be in (0,1)");
  if (!(config_.clause_decay > 0.0 && config_.clause_decay < 1.0)) {
    throw std::invalid_argument("clause_decay must be in (0,1)");
  }
  const std::size_t lits = 2 * (num_vars_ + 1);
  watches_.resize(lits);
  standby_watches_.resize(lits);
  lit_value_.assign(lits, Value::Unassigned);
  level_.assign(num_vars_ + 1, 0);
  reason_.assign(num_vars_ + 1, kNoClause);
  phase_.assign(num_vars_ + 1, config_.initial_phase);
  activity_.assign(num_vars_ + 1, 0.0);
  seen_.assign(num_vars_ + 1, 0);
  level_stamp_.assign(num_vars_ + 2, 0);

  if (config_.activity_seed != 0) {
    std::mt19937_64 rng(config_.activity_seed);
    std::uniform_real_distribution<double> noise(0.0, 1e-3);
    for (Var v = 1; v <= num_vars_; ++v) activity_[v] = noise(rng);
  }
  order_.reset(num_vars_);
  for (Var v = 1; v <= num_vars_; ++v) order_.insert(v);

  next_reduce_ = config_.first_reduce;
  reduce_interval_ = config_.first_reduce;

  if (formula.trivially_unsat) {
    status_ = SolveStatus::Unsat;
    return;
  }
  LitVec units;
  for (const LitVec& input : formula.clauses) {
    for (Lit l : input) {
      if (l.var() == 0 || l.var() > num_vars_) throw std::invalid_argument("literal variable out of range");
    }
    NormalizedClause n = normalize_clause(input);
    if (n.kind == NormalizeKind::Tautology) continue;
    if (n.kind == NormalizeKind::Empty) {
      status_ = SolveStatus::Unsat;
      return;
    }
    if (n.lits.size() == 1) {
      units.push_back(n.lits.front());
      continue;
    }
    ClauseMeta meta;
    meta.id = next_clause_id();
    meta.lbd = static_cast<std::uint32_t>(n.lits.size());
    meta.learn_lbd = meta.lbd;
    attach(alloc_clause(std::move(n.lits), std::move(meta)));
  }
  for (Lit u : units) {
    if (value(u) == Value::False) {
      status_ = SolveStatus::Unsat;
      return;
    }
    if (value(u) == Value::Unassigned) enqueue(u, kNoClause);
  }
  if (propagate() != kNoClause) status_ = SolveStatus::Unsat;
}

void Engine::set_trace(TraceSink sink, std::size_t worker) {
  trace_ = std::move(sink);
  worker_ = worker;
}

void Engine::emit(TraceEvent event) const {
  if (!trace_) return;
  event.worker = worker_;
  trace_(event);
}

// ---------------------------------------------------------------------------
// Clause storage

ClauseRef Engine::alloc_clause(LitVec lits, ClauseMeta meta) {
  ClauseRef cref;
  if (!free_slots_.empty()) {
    cref = free_slots_.back();
    free_slots_.pop_back();
  } else {
    cref = static_cast<ClauseRef>(clauses_.size());
    clauses_.emplace_back();
  }
  StoredClause& c = clauses_[cref];
  c.lits = std::move(lits);
  c.meta = std::move(meta);
  c.live = true;
  return cref;
}

void Engine::attach(ClauseRef cref) {
  const StoredClause& c = clauses_[cref];
  assert(c.lits.size() >= 2);
  if (c.meta.standby) {
    standby_watches_[c.lits[0].code()].push_back({cref, c.lits[0]});
    return;
  }
  watches_[c.lits[0].code()].push_back({cref, c.lits[1]});
  watches_[c.lits[1].code()].push_back({cref, c.lits[0]});
}

void Engine::detach(ClauseRef cref) {
  const StoredClause& c = clauses_[cref];
  auto drop = [cref](std::vector<Watcher>& list) {
    std::erase_if(list, [cref](const Watcher& w) { return w.cref == cref; });
  };
  if (c.meta.standby) {
    drop(standby_watches_[c.lits[0].code()]);
    return;
  }
  drop(watches_[c.lits[0].code()]);
  drop(watches_[c.lits[1].code()]);
}

bool Engine::locked(ClauseRef cref) const {
  const StoredClause& c = clauses_[cref];
  const Var v = c.lits[0].var();
  return reason_[v] == cref && value(c.lits[0]) == Value::True;
}

void Engine::remove_clause(ClauseRef cref) {
  StoredClause& c = clauses_[cref];
  if (!c.live) throw std::logic_error("removing a dead clause");
  if (locked(cref)) {
    if (level_[c.lits[0].var()] != 0) throw std::logic_error("removing the reason of a non-root literal");
    // Root-level reasons are never consulted by analysis.
    reason_[c.lits[0].var()] = kNoClause;
  }
  detach(cref);
  c.live = false;
  c.lits.clear();
  c.meta = ClauseMeta{};
  free_slots_.push_back(cref);
}

std::vector<ClauseRef> Engine::learned_clauses() const {
  std::vector<ClauseRef> out;
  for (ClauseRef cref = 0; cref < clauses_.size(); ++cref) {
    if (clauses_[cref].live && clauses_[cref].meta.learned) out.push_back(cref);
  }
  return out;
}

std::size_t Engine::num_learned() const {
  return static_cast<std::size_t>(std::count_if(clauses_.begin(), clauses_.end(), [](const StoredClause& c) {
    return c.live && c.meta.learned;
  }));
}

// ---------------------------------------------------------------------------
// Assignment

void Engine::enqueue(Lit l, ClauseRef reason) {
  assert(value(l) == Value::Unassigned);
  lit_value_[l.code()] = Value::True;
  lit_value_[(~l).code()] = Value::False;
  level_[l.var()] = decision_level();
  reason_[l.var()] = reason;
  trail_.push_back(l);
}

void Engine::assume(Lit l) {
  trail_lim_.push_back(trail_.size());
  enqueue(l, kNoClause);
}

void Engine::backtrack(int level) {
  if (decision_level() <= level) return;
  const std::size_t keep = trail_lim_[static_cast<std::size_t>(level)];
  for (std::size_t i = trail_.size(); i-- > keep;) {
    const Lit l = trail_[i];
    const Var v = l.var();
    lit_value_[l.code()] = Value::Unassigned;
    lit_value_[(~l).code()] = Value::Unassigned;
    reason_[v] = kNoClause;
    if (!probing_) phase_[v] = !l.negated();
    if (!order_.contains(v)) order_.insert(v);
  }
  trail_.resize(keep);
  trail_lim_.resize(static_cast<std::size_t>(level));
  qhead_ = trail_.size();
}

std::optional<Lit> Engine::decide() {
  while (!order_.empty()) {
    const Var v = order_.raw().front();
    if (lit_value_[Lit::positive(v).code()] == Value::Unassigned) return Lit::make(v, !phase_[v]);
    order_.pop();
  }
  return std::nullopt;
}

std::vector<Var> Engine::decision_order() const {
  std::vector<Var> vars;
  for (Var v = 1; v <= num_vars_; ++v) {
    if (lit_value_[Lit::positive(v).code()] == Value::Unassigned) vars.push_back(v);
  }
  std::sort(vars.begin(), vars.end(), [this](Var a, Var b) {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  });
  return vars;
}

// ---------------------------------------------------------------------------
// Propagation

ClauseRef Engine::propagate() {
  ClauseRef conflict = kNoClause;
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = ~p;
    ++stats_.propagations_total;
    if (probing_) ++stats_.propagations_vivify;

    std::vector<Watcher>& ws = watches_[false_lit.code()];
    std::size_t i = 0;
    std::size_t j = 0;
    const std::size_t n = ws.size();
    while (i < n) {
      const Watcher w = ws[i];
      if (value(w.blocker) == Value::True || w.cref == ignored_) {
        ws[j++] = ws[i++];
        continue;
      }
      LitVec& lits = clauses_[w.cref].lits;
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      ++i;
      const Lit first = lits[0];
      const Watcher keep{w.cref, first};
      if (first != w.blocker && value(first) == Value::True) {
        ws[j++] = keep;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < lits.size(); ++k) {
        if (value(lits[k]) != Value::False) {
          lits[1] = lits[k];
          lits[k] = false_lit;
          watches_[lits[1].code()].push_back(keep);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = keep;
      if (value(first) == Value::False) {
        conflict = w.cref;
        qhead_ = trail_.size();
        while (i < n) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (conflict != kNoClause) return conflict;

    // Lazily imported clauses: only look for a falsified clause.
    std::vector<Watcher>& ss = standby_watches_[false_lit.code()];
    i = 0;
    j = 0;
    const std::size_t m = ss.size();
    while (i < m) {
      const Watcher w = ss[i++];
      LitVec& lits = clauses_[w.cref].lits;
      bool moved = false;
      for (std::size_t k = 1; k < lits.size(); ++k) {
        if (value(lits[k]) != Value::False) {
          std::swap(lits[0], lits[k]);
          standby_watches_[lits[0].code()].push_back({w.cref, lits[0]});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      // Falsified: promote to a regular two-watched clause, highest levels first.
      std::sort(lits.begin(), lits.end(), [this](Lit a, Lit b) { return level_[a.var()] > level_[b.var()]; });
      clauses_[w.cref].meta.standby = false;
      attach(w.cref);
      conflict = w.cref;
      qhead_ = trail_.size();
      while (i < m) ss[j++] = ss[i++];
    }
    ss.resize(j);
    if (conflict != kNoClause) return conflict;
  }
  return kNoClause;
}

// ---------------------------------------------------------------------------
// Conflict analysis

std::uint32_t Engine::compute_lbd(const LitVec& lits) const {
  ++stamp_;
  std::uint32_t distinct = 0;
  for (Lit l : lits) {
    const auto lvl = static_cast<std::size_t>(level_[l.var()]);
    if (lvl >= level_stamp_.size()) level_stamp_.resize(lvl + 1, 0);
    if (level_stamp_[lvl] != stamp_) {
      level_stamp_[lvl] = stamp_;
      ++distinct;
    }
  }
  return std::max<std::uint32_t>(distinct, 1);
}

void Engine::bump_var(Var v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (Var u = 1; u <= num_vars_; ++u) activity_[u] *= 1e-100;
    var_inc_ *= 1e-100;
  }
  order_.increased(v);
}

void Engine::bump_clause(ClauseRef cref) {
  if ((clauses_[cref].meta.activity += clause_inc_) > 1e20) {
    for (StoredClause& c : clauses_) {
      if (c.live && c.meta.learned) c.meta.activity *= 1e-20;
    }
    clause_inc_ *= 1e-20;
  }
}

void Engine::set_activity(Var v, double activity) {
  if (v == 0 || v > num_vars_ || !(activity >= 0.0)) throw std::invalid_argument("bad activity update");
  activity_[v] = activity;
  order_.rebuild();
}

void Engine::decay_activities() {
  var_inc_ /= config_.var_decay;
  clause_inc_ /= config_.clause_decay;
}

bool Engine::redundant(Lit p, std::uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(p);
  const std::size_t top = analyze_clear_.size();
  while (!analyze_stack_.empty()) {
    const Var v = analyze_stack_.back().var();
    analyze_stack_.pop_back();
    const LitVec& reason = clauses_[reason_[v]].lits;
    for (std::size_t k = 1; k < reason.size(); ++k) {
      const Lit q = reason[k];
      const Var u = q.var();
      if (seen_[u] || level_[u] == 0) continue;
      if (reason_[u] != kNoClause && (abstract_level(u) & abstract_levels) != 0) {
        seen_[u] = 1;
        analyze_stack_.push_back(q);
        analyze_clear_.push_back(q);
      } else {
        for (std::size_t j = top; j < analyze_clear_.size(); ++j) seen_[analyze_clear_[j].var()] = 0;
        analyze_clear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

Engine::Analysis Engine::analyze(ClauseRef conflict) {
  if (decision_level() == 0) throw std::logic_error("analyze at decision level 0");
  Analysis out;
  LitVec& learnt = out.learned;
  learnt.push_back(Lit());

  int path = 0;
  Lit p;
  bool have_p = false;
  std::size_t index = trail_.size();
  ClauseRef confl = conflict;
  do {
    assert(confl != kNoClause);
    StoredClause& c = clauses_[confl];
    if (c.meta.learned) {
      bump_clause(confl);
      if (c.meta.lbd > 2) {
        const std::uint32_t fresh = compute_lbd(c.lits);
        if (fresh < c.meta.lbd) c.meta.lbd = fresh;
      }
    }
    for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
      const Lit q = c.lits[k];
      const Var v = q.var();
      if (seen_[v] || level_[v] == 0) continue;
      bump_var(v);
      seen_[v] = 1;
      if (level_[v] >= decision_level()) {
        ++path;
      } else {
        learnt.push_back(q);
      }
    }
    do {
      --index;
    } while (!seen_[trail_[index].var()]);
    p = trail_[index];
    have_p = true;
    confl = reason_[p.var()];
    seen_[p.var()] = 0;
    --path;
  } while (path > 0);
  learnt[0] = ~p;

  // Recursive minimization: drop literals implied by the rest of the clause.
  analyze_clear_ = learnt;
  std::uint32_t abstract_levels = 0;
  for (std::size_t i = 1; i < learnt.size(); ++i) abstract_levels |= abstract_level(learnt[i].var());
  std::size_t kept = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    const Var v = learnt[i].var();
    if (reason_[v] == kNoClause || !redundant(learnt[i], abstract_levels)) learnt[kept++] = learnt[i];
  }
  learnt.resize(kept);
  for (Lit l : analyze_clear_) seen_[l.var()] = 0;

  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i) {
      if (level_[learnt[i].var()] > level_[learnt[max_i].var()]) max_i = i;
    }
    std::swap(learnt[1], learnt[max_i]);
    out.backtrack_level = level_[learnt[1].var()];
  }
  out.lbd = compute_lbd(learnt);
  return out;
}

LitVec Engine::minimize_learned(LitVec clause) {
  if (clause.size() <= 1) return clause;
  for (Lit l : clause) seen_[l.var()] = 1;
  analyze_clear_ = clause;
  std::uint32_t abstract_levels = 0;
  for (std::size_t i = 1; i < clause.size(); ++i) abstract_levels |= abstract_level(clause[i].var());
  std::size_t kept = 1;
  for (std::size_t i = 1; i < clause.size(); ++i) {
    const Var v = clause[i].var();
    if (reason_[v] == kNoClause || level_[v] == 0 || !redundant(clause[i], abstract_levels)) clause[kept++] = clause[i];
  }
  clause.resize(kept);
  for (Lit l : analyze_clear_) seen_[l.var()] = 0;
  return clause;
}

LitVec Engine::conflict_decisions(ClauseRef conflict) {
  LitVec out;
  if (decision_level() == 0) return out;
  for (Lit l : clauses_[conflict].lits) {
    if (level_[l.var()] > 0) seen_[l.var()] = 1;
  }
  for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
    const Var v = trail_[i].var();
    if (!seen_[v]) continue;
    seen_[v] = 0;
    if (reason_[v] == kNoClause) {
      out.push_back(~trail_[i]);
      continue;
    }
    const LitVec& reason = clauses_[reason_[v]].lits;
    for (std::size_t k = 1; k < reason.size(); ++k) {
      if (level_[reason[k].var()] > 0) seen_[reason[k].var()] = 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Learning, restarts, reduction

ClauseRef Engine::attach_learned(LitVec lits, std::uint32_t lbd) {
  if (lits.size() < 2) throw std::invalid_argument("attach_learned needs at least two literals");
  ClauseMeta meta;
  meta.id = next_clause_id();
  meta.learned = true;
  meta.lbd = std::min<std::uint32_t>(std::max<std::uint32_t>(lbd, 1), static_cast<std::uint32_t>(lits.size()));
  meta.learn_lbd = meta.lbd;
  const ClauseRef cref = alloc_clause(std::move(lits), std::move(meta));
  attach(cref);
  return cref;
}

void Engine::learn(Analysis analysis) {
  ++stats_.clauses_learned;
  SearchHooks& hooks = hooks_ != nullptr ? *hooks_ : default_hooks();
  if (analysis.learned.size() == 1) {
    enqueue(analysis.learned[0], kNoClause);
    if (tracing()) emit({.kind = TraceKind::Learned, .lits = analysis.learned, .lbd = 1, .learn_lbd = 1});
    hooks.on_learn(*this, kNoClause, analysis.learned, 1);
    return;
  }
  const ClauseRef cref = attach_learned(analysis.learned, analysis.lbd);
  bump_clause(cref);
  enqueue(analysis.learned[0], cref);
  if (tracing()) {
    emit({.kind = TraceKind::Learned,
          .clause_id = clauses_[cref].meta.id,
          .lits = analysis.learned,
          .lbd = analysis.lbd,
          .learn_lbd = analysis.lbd});
  }
  hooks.on_learn(*this, cref, analysis.learned, analysis.lbd);
}

bool Engine::propagate_root() {
  if (decision_level() != 0) throw std::logic_error("root propagation above level 0");
  if (status_ == SolveStatus::Unsat) return false;
  if (propagate() != kNoClause) {
    status_ = SolveStatus::Unsat;
    return false;
  }
  return true;
}

bool Engine::add_root_unit(Lit l) {
  if (decision_level() != 0) throw std::logic_error("root unit above level 0");
  if (value(l) == Value::True) return propagate_root();
  if (value(l) == Value::False) {
    status_ = SolveStatus::Unsat;
    return false;
  }
  enqueue(l, kNoClause);
  return propagate_root();
}

void Engine::restart() {
  backtrack(0);
  ++stats_.restarts;
  restart_.on_restart();
  if (!propagate_root()) return;
  SearchHooks& hooks = hooks_ != nullptr ? *hooks_ : default_hooks();
  hooks.on_restart(*this);
}

std::size_t Engine::reduce_db() {
  std::vector<ClauseRef> pool;
  for (ClauseRef cref = 0; cref < clauses_.size(); ++cref) {
    const StoredClause& c = clauses_[cref];
    if (c.live && c.meta.learned && !c.meta.reduce_protected && c.lits.size() > 2) pool.push_back(cref);
  }
  // Worst first: high LBD, then low activity.
  std::sort(pool.begin(), pool.end(), [this](ClauseRef a, ClauseRef b) {
    const ClauseMeta& ma = clauses_[a].meta;
    const ClauseMeta& mb = clauses_[b].meta;
    if (ma.lbd != mb.lbd) return ma.lbd > mb.lbd;
    if (ma.activity != mb.activity) return ma.activity < mb.activity;
    return ma.id < mb.id;
  });
  const std::size_t target = pool.size() / 2;
  std::size_t removed = 0;
  for (ClauseRef cref : pool) {
    if (removed == target) break;
    if (locked(cref)) continue;
    if (tracing()) {
      const ClauseMeta& m = clauses_[cref].meta;
      emit({.kind = TraceKind::Reduced,
            .clause_id = m.id,
            .lits = clauses_[cref].lits,
            .lbd = m.lbd,
            .learn_lbd = m.learn_lbd,
            .vivify_attempted = m.vivify_attempted,
            .reduce_protected = m.reduce_protected});
    }
    remove_clause(cref);
    ++removed;
  }
  ++stats_.reductions;
  return removed;
}

ClauseRef Engine::replace_clause(ClauseRef cref, LitVec lits) {
  if (decision_level() != 0) throw std::logic_error("replace_clause above level 0");
  ClauseMeta meta = clauses_[cref].meta;
  remove_clause(cref);
  LitVec kept;
  for (Lit l : lits) {
    if (value(l) == Value::True) return kNoClause;
    if (value(l) == Value::Unassigned) kept.push_back(l);
  }
  if (kept.empty()) {
    status_ = SolveStatus::Unsat;
    return kNoClause;
  }
  if (kept.size() == 1) {
    add_root_unit(kept[0]);
    return kNoClause;
  }
  meta.lbd = std::min<std::uint32_t>(meta.lbd, static_cast<std::uint32_t>(kept.size()));
  const ClauseRef fresh = alloc_clause(std::move(kept), std::move(meta));
  attach(fresh);
  return fresh;
}

// ---------------------------------------------------------------------------
// Imports

bool Engine::handle_false_import(ClauseRef cref, ImportResult& result) {
  StoredClause& c = clauses_[cref];
  const int top = level_[c.lits[0].var()];
  c.meta.standby = false;
  if (top == 0) {
    attach(cref);
    status_ = SolveStatus::Unsat;
    result = ImportResult::Conflict;
    return false;
  }
  const int second = level_[c.lits[1].var()];
  if (second < top) {
    backtrack(second);
    attach(cref);
    enqueue(clauses_[cref].lits[0], cref);
    result = ImportResult::Unit;
    return true;
  }
  backtrack(top);
  attach(cref);
  pending_conflict_ = cref;
  result = ImportResult::Conflict;
  return true;
}

Engine::ImportResult Engine::import_clause(LitVec lits, std::uint32_t lbd, LinkHandle link, bool two_watched) {
  if (lits.empty()) throw std::invalid_argument("empty import");
  for (Lit l : lits) {
    if (value(l) == Value::True && level_[l.var()] == 0) return ImportResult::Dropped;
  }
  ++stats_.clauses_imported;
  if (lits.size() == 1) {
    backtrack(0);
    if (!add_root_unit(lits[0])) return ImportResult::Conflict;
    return ImportResult::Unit;
  }

  // Non-false literals first (true ones by ascending level), then false ones
  // by descending level, so positions 0 and 1 are the right watches.
  auto rank = [this](Lit l) {
    const Value v = value(l);
    const int lvl = level_[l.var()];
    if (v == Value::True) return std::pair{0, lvl};
    if (v == Value::Unassigned) return std::pair{1, 0};
    return std::pair{2, -lvl};
  };
  std::stable_sort(lits.begin(), lits.end(), [&rank](Lit a, Lit b) { return rank(a) < rank(b); });

  ClauseMeta meta;
  meta.id = next_clause_id();
  meta.learned = true;
  meta.imported = true;
  meta.lbd = std::min<std::uint32_t>(std::max<std::uint32_t>(lbd, 1), static_cast<std::uint32_t>(lits.size()));
  meta.learn_lbd = meta.lbd;
  meta.standby = !two_watched;
  meta.link = std::move(link);
  const ClauseRef cref = alloc_clause(std::move(lits), std::move(meta));
  const LitVec& c = clauses_[cref].lits;

  ImportResult result = ImportResult::Attached;
  if (!two_watched) {
    if (value(c[0]) != Value::False) {
      attach(cref);
      return result;
    }
    handle_false_import(cref, result);
    return result;
  }
  if (value(c[1]) != Value::False) {
    attach(cref);
    return result;
  }
  if (value(c[0]) == Value::False) {
    handle_false_import(cref, result);
    return result;
  }
  const int false_level = level_[c[1].var()];
  if (value(c[0]) == Value::True && level_[c[0].var()] <= false_level) {
    attach(cref);
    return result;
  }
  backtrack(false_level);
  attach(cref);
  enqueue(clauses_[cref].lits[0], cref);
  return ImportResult::Unit;
}

// ---------------------------------------------------------------------------
// Probing

void Engine::begin_probe(ClauseRef ignored) {
  if (decision_level() != 0) throw std::logic_error("probing must start at level 0");
  probing_ = true;
  ignored_ = ignored;
}

void Engine::end_probe() {
  backtrack(0);
  probing_ = false;
  ignored_ = kNoClause;
}

// ---------------------------------------------------------------------------
// Search

bool Engine::budget_exhausted(const Budget& budget, std::uint64_t start_conflicts) const {
  if (budget.max_conflicts != 0 && stats_.conflicts - start_conflicts >= budget.max_conflicts) return true;
  if (budget.stop != nullptr && budget.stop->load(std::memory_order_relaxed)) return true;
  if (budget.deadline && std::chrono::steady_clock::now() >= *budget.deadline) return true;
  return false;
}

void Engine::build_model() {
  model_.assign(num_vars_ + 1, false);
  for (Var v = 1; v <= num_vars_; ++v) model_[v] = value(Lit::positive(v)) == Value::True;
}

SolveStatus Engine::solve(const Budget& budget) {
  if (status_ != SolveStatus::Unknown) return status_;
  SearchHooks& hooks = hooks_ != nullptr ? *hooks_ : default_hooks();
  const std::uint64_t start_conflicts = stats_.conflicts;

  for (;;) {
    ClauseRef conflict = pending_conflict_;
    pending_conflict_ = kNoClause;
    if (conflict == kNoClause) conflict = propagate();

    if (conflict != kNoClause) {
      ++stats_.conflicts;
      if (decision_level() == 0) {
        status_ = SolveStatus::Unsat;
        return status_;
      }
      Analysis analysis = analyze(conflict);
      backtrack(analysis.backtrack_level);
      restart_.on_conflict(analysis.lbd);
      learn(std::move(analysis));
      decay_activities();
      if (config_.check_invariants && !check_invariants()) throw std::logic_error("engine invariant violated");

      if (stats_.conflicts >= next_reduce_) {
        reduce_interval_ += config_.reduce_increment;
        next_reduce_ = stats_.conflicts + reduce_interval_;
        hooks.before_reduce(*this);
        if (status_ != SolveStatus::Unknown) return status_;
      }
      if (restart_.should_restart()) {
        restart();
        if (status_ != SolveStatus::Unknown) return status_;
      }
      if (budget.max_conflicts != 0 && stats_.conflicts - start_conflicts >= budget.max_conflicts) {
        return SolveStatus::Unknown;
      }
      continue;
    }

    if (budget_exhausted(budget, start_conflicts)) return SolveStatus::Unknown;
    hooks.on_decision_point(*this);
    if (status_ != SolveStatus::Unknown) return status_;
    if (pending_conflict_ != kNoClause || propagation_pending()) continue;

    const std::optional<Lit> next = decide();
    if (!next) {
      build_model();
      status_ = SolveStatus::Sat;
      return status_;
    }
    ++stats_.decisions;
    assume(*next);
  }
}

// ---------------------------------------------------------------------------
// Invariants

bool Engine::check_invariants() const {
  std::size_t assigned = 0;
  for (Var v = 1; v <= num_vars_; ++v) {
    if (lit_value_[Lit::positive(v).code()] != Value::Unassigned) ++assigned;
  }
  if (assigned != trail_.size()) return false;
  int prev_level = 0;
  for (std::size_t i = 0; i < trail_.size(); ++i) {
    if (value(trail_[i]) != Value::True) return false;
    const int lvl = level_[trail_[i].var()];
    if (lvl < prev_level) return false;
    prev_level = lvl;
    if (reason_[trail_[i].var()] == kNoClause && lvl > 0) {
      // Decisions open their level.
      if (trail_lim_[static_cast<std::size_t>(lvl) - 1] != i) return false;
    }
  }

  std::unordered_map<ClauseRef, std::vector<Lit>> seen_watch;
  std::unordered_map<ClauseRef, std::vector<Lit>> seen_standby;
  for (std::uint32_t code = 0; code < watches_.size(); ++code) {
    for (const Watcher& w : watches_[code]) seen_watch[w.cref].push_back(Lit::from_code(code));
    for (const Watcher& w : standby_watches_[code]) seen_standby[w.cref].push_back(Lit::from_code(code));
  }
  const bool at_fixpoint =
      status_ != SolveStatus::Unsat && !propagation_pending() && pending_conflict_ == kNoClause;
  for (ClauseRef cref = 0; cref < clauses_.size(); ++cref) {
    const StoredClause& c = clauses_[cref];
    if (!c.live) {
      if (seen_watch.count(cref) != 0 || seen_standby.count(cref) != 0) return false;
      continue;
    }
    if (c.lits.size() < 2) return false;
    if (c.meta.lbd < 1 || c.meta.lbd > c.lits.size()) return false;
    if (c.meta.imported && !c.meta.learned) return false;
    if (c.meta.standby) {
      const auto it = seen_standby.find(cref);
      if (it == seen_standby.end() || it->second.size() != 1 || it->second[0] != c.lits[0]) return false;
      if (seen_watch.count(cref) != 0) return false;
      continue;
    }
    const auto it = seen_watch.find(cref);
    if (it == seen_watch.end() || it->second.size() != 2) return false;
    std::vector<Lit> expect{c.lits[0], c.lits[1]};
    std::vector<Lit> got = it->second;
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    if (expect != got || c.lits[0] == c.lits[1]) return false;
    if (at_fixpoint && cref != ignored_) {
      // A false watch is only allowed in a satisfied clause (blockers skip those).
      if (value(c.lits[0]) == Value::False || value(c.lits[1]) == Value::False) {
        if (std::none_of(c.lits.begin(), c.lits.end(), [this](Lit l) { return value(l) == Value::True; })) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace vivipar
