#include "vivipar/strategy.hpp"

#include <charconv>
#include <stdexcept>

namespace vivipar {

std::string LcmMode::label() const {
  switch (kind) {
    case LcmKind::None: return "none";
    case LcmKind::Pcm: return "pcm";
    case LcmKind::Lpcm: return "lpcm";
    case LcmKind::Ecm: return "ecm" + std::to_string(ecm_max_lbd);
  }
  return "?";
}

LcmMode LcmMode::parse(std::string_view name, std::uint32_t ecm_max_lbd) {
  LcmMode mode;
  mode.ecm_max_lbd = ecm_max_lbd;
  if (name == "none") return mode;
  if (name == "pcm") {
    mode.kind = LcmKind::Pcm;
    return mode;
  }
  if (name == "lpcm") {
    mode.kind = LcmKind::Lpcm;
    return mode;
  }
  if (name.starts_with("ecm")) {
    mode.kind = LcmKind::Ecm;
    std::string_view digits = name.substr(3);
    if (!digits.empty()) {
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), mode.ecm_max_lbd);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw std::invalid_argument("bad lcm mode '" + std::string(name) + "'");
      }
    }
    if (mode.ecm_max_lbd < 1) throw std::invalid_argument("ecm max lbd must be at least 1");
    return mode;
  }
  throw std::invalid_argument("unknown lcm mode '" + std::string(name) + "'");
}

Strategy::Strategy(StrategyConfig config, std::size_t worker, SharedPool* pool)
    : config_(config), worker_(worker), pool_(pool) {
  if (config_.mode.kind == LcmKind::Ecm && config_.mode.ecm_max_lbd < 1) {
    throw std::invalid_argument("ecm max lbd must be at least 1");
  }
}

bool Strategy::export_clause(Engine& engine, ClauseRef cref, const LitVec& lits, std::uint32_t lbd) {
  if (pool_ == nullptr || !config_.filter.accepts(lits.size(), lbd)) return false;
  SharedClause record{lits, lbd, worker_, nullptr};
  std::uint32_t learn_lbd = lbd;
  bool attempted = false;
  if (cref != kNoClause) {
    ClauseMeta& meta = engine.meta(cref);
    learn_lbd = meta.learn_lbd;
    attempted = meta.vivify_attempted;
    if (config_.mode.kind == LcmKind::Lpcm && !attempted) {
      meta.link = std::make_shared<LinkCell>(worker_);
      record.link = meta.link;
    }
  }
  pool_->publish(record);
  ++engine.stats().clauses_exported;
  if (engine.tracing()) {
    engine.emit({.kind = TraceKind::Exported,
                 .clause_id = cref != kNoClause ? engine.clause(cref).meta.id : 0,
                 .lits = lits,
                 .lbd = lbd,
                 .learn_lbd = learn_lbd,
                 .vivify_attempted = attempted});
  }
  return true;
}

void Strategy::on_learn(Engine& engine, ClauseRef cref, const LitVec& lits, std::uint32_t lbd) {
  if (config_.mode.kind == LcmKind::Ecm && cref != kNoClause && lbd <= config_.mode.ecm_max_lbd) {
    ClauseMeta& meta = engine.meta(cref);
    meta.reduce_protected = true;
    withheld_.push_back({cref, meta.id});
    if (engine.tracing()) {
      engine.emit({.kind = TraceKind::Withheld,
                   .clause_id = meta.id,
                   .lits = lits,
                   .lbd = lbd,
                   .learn_lbd = lbd,
                   .reduce_protected = true});
    }
    return;
  }
  export_clause(engine, cref, lits, lbd);
}

void Strategy::flush_withheld(Engine& engine) {
  std::vector<Held> queue;
  queue.swap(withheld_);
  for (const Held& held : queue) {
    if (!engine.is_live(held.cref) || engine.clause(held.cref).meta.id != held.id) continue;
    engine.meta(held.cref).reduce_protected = false;
    if (engine.status() == SolveStatus::Unsat) continue;

    const std::uint32_t learn_lbd = engine.clause(held.cref).meta.learn_lbd;
    const std::uint64_t id = held.id;
    const VivifyOutcome outcome = vivify_clause(engine, held.cref, config_.vivify_budget);
    const ClauseRef now = apply_outcome(engine, held.cref, outcome);
    if (engine.status() == SolveStatus::Unsat) continue;

    LitVec final_lits;
    std::uint32_t lbd = 1;
    if (now != kNoClause) {
      final_lits = engine.clause(now).lits;
      lbd = engine.clause(now).meta.lbd;
    } else if (outcome.success() && outcome.lits.size() == 1) {
      final_lits = outcome.lits;
    } else {
      continue;  // satisfied at level 0: nothing worth sharing
    }
    if (pool_ == nullptr || !config_.filter.accepts(final_lits.size(), lbd)) continue;
    pool_->publish({final_lits, lbd, worker_, nullptr});
    ++engine.stats().clauses_exported;
    if (engine.tracing()) {
      engine.emit({.kind = TraceKind::Exported,
                   .clause_id = id,
                   .lits = final_lits,
                   .lbd = lbd,
                   .learn_lbd = learn_lbd,
                   .vivify_attempted = true});
    }
  }
}

void Strategy::publish_improvement(Engine& engine, const LinkHandle& link, const LitVec& improved,
                                   const LitVec& before, std::uint64_t clause_id) {
  if (!link || link->published()) return;
  link->publish(worker_, improved);
  ++engine.stats().improvements_published;
  if (engine.tracing()) {
    engine.emit({.kind = TraceKind::Published, .clause_id = clause_id, .lits = improved, .before = before});
  }
}

void Strategy::run_reduction(Engine& engine) {
  reduce_pending_ = false;
  if (!engine.propagate_root()) return;
  std::vector<Held> candidates;
  for (ClauseRef cref : select_candidates(engine, config_.candidates)) {
    candidates.push_back({cref, engine.clause(cref).meta.id});
  }
  for (const Held& held : candidates) {
    if (!engine.is_live(held.cref) || engine.clause(held.cref).meta.id != held.id) continue;
    const LinkHandle link = engine.clause(held.cref).meta.link;
    const LitVec before = engine.clause(held.cref).lits;
    const VivifyOutcome outcome = vivify_clause(engine, held.cref, config_.vivify_budget);
    const ClauseRef now = apply_outcome(engine, held.cref, outcome);
    if (outcome.success() && config_.mode.kind == LcmKind::Lpcm) {
      publish_improvement(engine, link, outcome.lits, before, held.id);
      if (now != kNoClause) engine.meta(now).link.reset();
    }
    if (engine.status() == SolveStatus::Unsat) return;
  }
  if (config_.mode.kind == LcmKind::Lpcm) {
    adopt_improvements(engine);
    if (engine.status() == SolveStatus::Unsat) return;
  }
  engine.reduce_db();
}

std::size_t Strategy::adopt_improvements(Engine& engine) {
  std::size_t adopted = 0;
  for (ClauseRef cref : engine.learned_clauses()) {
    if (!engine.is_live(cref)) continue;
    const ClauseMeta& meta = engine.clause(cref).meta;
    if (!meta.imported || !meta.link) continue;
    const LitVec* improved = meta.link->poll();
    if (improved == nullptr) continue;
    const LitVec fresh = *improved;
    const LitVec before = engine.clause(cref).lits;
    const std::uint64_t id = meta.id;
    engine.meta(cref).link.reset();
    const ClauseRef now = engine.replace_clause(cref, fresh);
    ++engine.stats().improvements_adopted;
    ++adopted;
    if (engine.tracing()) {
      engine.emit({.kind = TraceKind::Adopted,
                   .clause_id = id,
                   .lits = now != kNoClause ? engine.clause(now).lits : fresh,
                   .before = before});
    }
    if (engine.status() == SolveStatus::Unsat) break;
  }
  return adopted;
}

void Strategy::on_restart(Engine& engine) {
  if (config_.mode.kind == LcmKind::Ecm) flush_withheld(engine);
  if (reduce_pending_ && engine.status() == SolveStatus::Unknown) run_reduction(engine);
}

void Strategy::before_reduce(Engine& engine) {
  switch (config_.mode.kind) {
    case LcmKind::None:
    case LcmKind::Ecm:
      engine.reduce_db();
      return;
    case LcmKind::Pcm:
    case LcmKind::Lpcm:
      // Vivification needs level 0; postpone the whole reduction until then.
      if (engine.decision_level() != 0) {
        reduce_pending_ = true;
        return;
      }
      run_reduction(engine);
      return;
  }
}

void Strategy::on_decision_point(Engine& engine) {
  if (pool_ == nullptr) return;
  if (backlog_.empty()) {
    std::vector<SharedClause> fresh = pool_->drain(worker_);
    backlog_.assign(std::make_move_iterator(fresh.begin()), std::make_move_iterator(fresh.end()));
  }
  while (!backlog_.empty()) {
    SharedClause record = std::move(backlog_.front());
    backlog_.pop_front();
    if (record.origin == worker_) throw std::logic_error("worker received its own export");
    LinkHandle link = config_.mode.kind == LcmKind::Lpcm ? record.link : nullptr;
    const bool two_watched = record.lbd < config_.two_watch_below;
    if (engine.tracing()) {
      engine.emit({.kind = TraceKind::Imported, .lits = record.lits, .lbd = record.lbd});
    }
    const Engine::ImportResult result =
        engine.import_clause(std::move(record.lits), record.lbd, std::move(link), two_watched);
    if (result == Engine::ImportResult::Conflict || engine.status() != SolveStatus::Unknown) break;
  }
}

}  // namespace vivipar
