#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "vivipar/engine.hpp"
#include "vivipar/exchange.hpp"
#include "vivipar/vivify.hpp"

namespace vivipar {

enum class LcmKind { None, Pcm, Lpcm, Ecm };

/// Learned-clause minimization workflow shared by every worker of a run.
struct LcmMode {
  LcmKind kind = LcmKind::None;
  // ECM only: clauses with learn-time LBD <= ecm_max_lbd are withheld until
  // vivified ("ecm3" withholds LBD < 4, "ecm4" LBD < 5).
  std::uint32_t ecm_max_lbd = 3;

  /// "none", "pcm", "lpcm", "ecm3", "ecm4", ...
  [[nodiscard]] std::string label() const;
  /// Accepts the CLI names plus "ecmN" shorthands. Throws std::invalid_argument.
  static LcmMode parse(std::string_view name, std::uint32_t ecm_max_lbd = 3);

  bool operator==(const LcmMode&) const = default;
};

struct StrategyConfig {
  LcmMode mode;
  ExportFilter filter;
  CandidatePolicy candidates;
  std::uint64_t vivify_budget = kDefaultVivifyBudget;
  // Imports below this LBD are two-watched; the rest wait on one watch.
  std::uint32_t two_watch_below = 4;
};

/// Worker-private orchestration of vivification and clause sharing. Installed
/// on an Engine as its SearchHooks.
class Strategy final : public SearchHooks {
 public:
  /// `pool` may be null for a worker that shares nothing.
  Strategy(StrategyConfig config, std::size_t worker, SharedPool* pool);

  void on_learn(Engine& engine, ClauseRef cref, const LitVec& lits, std::uint32_t lbd) override;
  void on_restart(Engine& engine) override;
  void before_reduce(Engine& engine) override;
  void on_decision_point(Engine& engine) override;

  /// Sends a clause through the export filter. In LPCM mode a link cell is
  /// attached when the clause has not been vivified yet.
  bool export_clause(Engine& engine, ClauseRef cref, const LitVec& lits, std::uint32_t lbd);
  /// ECM: vivify every withheld clause, then export its final form.
  void flush_withheld(Engine& engine);
  /// PCM/LPCM at level 0: vivify candidates, adopt linked improvements, reduce.
  void run_reduction(Engine& engine);
  /// LPCM importer side: swap in improvements published for imported copies.
  std::size_t adopt_improvements(Engine& engine);

  [[nodiscard]] const StrategyConfig& config() const { return config_; }
  [[nodiscard]] bool reduce_pending() const { return reduce_pending_; }
  [[nodiscard]] std::size_t withheld() const { return withheld_.size(); }
  [[nodiscard]] std::size_t worker() const { return worker_; }

 private:
  struct Held {
    ClauseRef cref;
    std::uint64_t id;
  };

  void publish_improvement(Engine& engine, const LinkHandle& link, const LitVec& improved,
                           const LitVec& before, std::uint64_t clause_id);

  StrategyConfig config_;
  std::size_t worker_;
  SharedPool* pool_;
  std::vector<Held> withheld_;
  std::deque<SharedClause> backlog_;
  bool reduce_pending_ = false;
};

}  // namespace vivipar
