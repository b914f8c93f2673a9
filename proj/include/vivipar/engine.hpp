#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "vivipar/exchange.hpp"
#include "vivipar/formula.hpp"
#include "vivipar/literal.hpp"
#include "vivipar/restart.hpp"
#include "vivipar/stats.hpp"
#include "vivipar/trace.hpp"

namespace vivipar {

using ClauseRef = std::uint32_t;
inline constexpr ClauseRef kNoClause = std::numeric_limits<ClauseRef>::max();

struct ClauseMeta {
  std::uint64_t id = 0;
  std::uint32_t lbd = 1;
  std::uint32_t learn_lbd = 1;
  double activity = 0.0;
  bool learned = false;
  bool imported = false;
  bool vivify_attempted = false;
  bool reduce_protected = false;
  // Lazily imported: watched on lits[0] only, checked for conflicts but never
  // used to propagate until promoted.
  bool standby = false;
  LinkHandle link;
};

struct StoredClause {
  LitVec lits;
  ClauseMeta meta;
  bool live = false;
};

struct EngineConfig {
  RestartConfig restart;
  double var_decay = 0.95;
  double clause_decay = 0.999;
  bool initial_phase = false;
  std::uint64_t first_reduce = 2000;
  std::uint64_t reduce_increment = 300;
  // Non-zero seeds a tiny random initial VSIDS activity (worker diversification).
  std::uint64_t activity_seed = 0;
  // Checks watch and trail invariants after every conflict. Slow; tests only.
  bool check_invariants = false;
};

enum class SolveStatus { Sat, Unsat, Unknown };

const char* to_string(SolveStatus status);

struct Budget {
  // Conflicts allowed in this call; 0 means unbounded.
  std::uint64_t max_conflicts = 0;
  const std::atomic<bool>* stop = nullptr;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

class Engine;

/// Extension points invoked by the search loop. The default behaviour is the
/// plain engine: no sharing, reductions run as soon as they are scheduled.
class SearchHooks {
 public:
  virtual ~SearchHooks() = default;
  /// `cref` is kNoClause for learned units, which are not stored.
  virtual void on_learn(Engine& engine, ClauseRef cref, const LitVec& lits, std::uint32_t lbd);
  /// Called at decision level 0 with root propagation complete.
  virtual void on_restart(Engine& engine);
  /// Called whenever the reduction schedule fires, at any decision level.
  virtual void before_reduce(Engine& engine);
  /// Called at propagation fixpoints before each decision.
  virtual void on_decision_point(Engine& engine);
};

/// Sequential CDCL solver: two-watched-literal propagation, first-UIP learning
/// with recursive minimization, VSIDS with phase saving, dynamic or Luby
/// restarts, LBD-based database halving. One instance per worker.
class Engine {
 public:
  struct Analysis {
    LitVec learned;  // learned[0] is the asserting literal
    int backtrack_level = 0;
    std::uint32_t lbd = 1;
  };

  enum class ImportResult { Dropped, Unit, Attached, Conflict };

  explicit Engine(const Formula& formula, EngineConfig config = {});

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  void set_hooks(SearchHooks* hooks) { hooks_ = hooks; }
  void set_trace(TraceSink sink, std::size_t worker);
  void emit(TraceEvent event) const;
  [[nodiscard]] bool tracing() const { return static_cast<bool>(trace_); }

  /// Runs (or resumes) the search until an answer or the budget is exhausted.
  SolveStatus solve(const Budget& budget = {});
  [[nodiscard]] SolveStatus status() const { return status_; }
  /// model()[v] is the value of variable v; index 0 unused. Valid after Sat.
  [[nodiscard]] const std::vector<bool>& model() const { return model_; }

  [[nodiscard]] std::size_t num_vars() const { return num_vars_; }
  [[nodiscard]] const EngineConfig& config() const { return config_; }
  [[nodiscard]] int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  [[nodiscard]] Value value(Lit l) const { return lit_value_[l.code()]; }
  [[nodiscard]] int level(Var v) const { return level_[v]; }
  [[nodiscard]] ClauseRef reason(Var v) const { return reason_[v]; }
  [[nodiscard]] const LitVec& trail() const { return trail_; }
  [[nodiscard]] bool propagation_pending() const { return qhead_ < trail_.size(); }

  [[nodiscard]] const StoredClause& clause(ClauseRef cref) const { return clauses_[cref]; }
  [[nodiscard]] ClauseMeta& meta(ClauseRef cref) { return clauses_[cref].meta; }
  [[nodiscard]] bool is_live(ClauseRef cref) const { return cref < clauses_.size() && clauses_[cref].live; }
  /// Live learned clauses in slot order.
  [[nodiscard]] std::vector<ClauseRef> learned_clauses() const;
  [[nodiscard]] std::size_t num_learned() const;
  [[nodiscard]] bool locked(ClauseRef cref) const;

  [[nodiscard]] Stats& stats() { return stats_; }
  [[nodiscard]] const Stats& stats() const { return stats_; }
  [[nodiscard]] double activity(Var v) const { return activity_[v]; }
  /// Overrides a VSIDS activity (external heuristics, tests).
  void set_activity(Var v, double activity);
  [[nodiscard]] Lit saved_phase(Var v) const { return Lit::make(v, !phase_[v]); }
  [[nodiscard]] const RestartPolicy& restart_policy() const { return restart_; }

  // -- CDCL building blocks ------------------------------------------------

  /// Unit propagation to fixpoint. Returns the conflicting clause or kNoClause.
  ClauseRef propagate();
  /// First-UIP analysis with recursive minimization. Requires level >= 1.
  Analysis analyze(ClauseRef conflict);
  /// Recursive minimization of a first-UIP clause whose literals are all
  /// false; clause[0] (the asserting literal) is always kept.
  LitVec minimize_learned(LitVec clause);
  /// Number of distinct decision levels among the (assigned) literals, min 1.
  [[nodiscard]] std::uint32_t compute_lbd(const LitVec& lits) const;
  /// Highest-activity unassigned variable with its saved phase.
  std::optional<Lit> decide();
  /// Opens a new decision level and assigns `l`.
  void assume(Lit l);
  void backtrack(int level);
  /// Removes the worse half of the unprotected, unlocked, non-binary learned clauses.
  std::size_t reduce_db();

  /// Backtracks to level 0 and restarts bookkeeping; runs on_restart.
  void restart();

  // -- Clause management ---------------------------------------------------

  /// Adds a learned clause (size >= 2) watched on lits[0], lits[1] as given.
  ClauseRef attach_learned(LitVec lits, std::uint32_t lbd);
  /// Asserts `l` at level 0 and propagates. Returns false (and marks the
  /// engine Unsat) on a root conflict. Requires decision level 0.
  bool add_root_unit(Lit l);
  /// Completes pending root-level propagation. False on root conflict.
  bool propagate_root();
  /// Replaces a clause at level 0 with a strictly smaller one. Units are
  /// asserted instead of stored. Returns the new handle or kNoClause.
  ClauseRef replace_clause(ClauseRef cref, LitVec lits);
  void remove_clause(ClauseRef cref);
  /// Adds a clause exported by another worker at the current decision level.
  /// Two-watched clauses may backtrack to make a unit or conflict consistent.
  ImportResult import_clause(LitVec lits, std::uint32_t lbd, LinkHandle link, bool two_watched);

  // -- Vivification support -----------------------------------------------

  /// Enters probing: propagations are attributed to vivification, `ignored` is
  /// skipped by propagation, and phases are not saved on backtrack.
  void begin_probe(ClauseRef ignored);
  /// Leaves probing and backtracks to level 0.
  void end_probe();
  [[nodiscard]] bool probing() const { return probing_; }
  /// Negations of the decisions the conflict depends on. No activity bumps.
  LitVec conflict_decisions(ClauseRef conflict);

  void mark_unsat() { status_ = SolveStatus::Unsat; }
  [[nodiscard]] std::uint64_t next_clause_id() { return next_id_++; }

  /// Watch and trail invariants; intended for tests and debug runs.
  [[nodiscard]] bool check_invariants() const;
  /// Unassigned variables in current decision order, for state comparisons.
  [[nodiscard]] std::vector<Var> decision_order() const;

 private:
  struct Watcher {
    ClauseRef cref;
    Lit blocker;
  };

  class VarHeap {
   public:
    explicit VarHeap(const std::vector<double>& activity) : activity_(activity) {}
    void reset(std::size_t num_vars);
    [[nodiscard]] bool contains(Var v) const { return v < index_.size() && index_[v] >= 0; }
    [[nodiscard]] bool empty() const { return heap_.empty(); }
    void insert(Var v);
    void increased(Var v);
    Var pop();
    void rebuild();
    [[nodiscard]] const std::vector<Var>& raw() const { return heap_; }

   private:
    [[nodiscard]] bool before(Var a, Var b) const {
      return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
    }
    void sift_up(std::size_t i);
    void sift_down(std::size_t i);

    const std::vector<double>& activity_;
    std::vector<Var> heap_;
    std::vector<int> index_;
  };

  ClauseRef alloc_clause(LitVec lits, ClauseMeta meta);
  void attach(ClauseRef cref);
  void detach(ClauseRef cref);
  void enqueue(Lit l, ClauseRef reason);
  void learn(Analysis analysis);
  bool redundant(Lit p, std::uint32_t abstract_levels);
  [[nodiscard]] std::uint32_t abstract_level(Var v) const { return 1u << (level_[v] & 31); }
  void bump_var(Var v);
  void bump_clause(ClauseRef cref);
  void decay_activities();
  bool handle_false_import(ClauseRef cref, ImportResult& result);
  bool budget_exhausted(const Budget& budget, std::uint64_t start_conflicts) const;
  void build_model();

  EngineConfig config_;
  std::size_t num_vars_ = 0;
  SolveStatus status_ = SolveStatus::Unknown;

  std::vector<StoredClause> clauses_;
  std::vector<ClauseRef> free_slots_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::vector<Watcher>> standby_watches_;

  std::vector<Value> lit_value_;
  std::vector<int> level_;
  std::vector<ClauseRef> reason_;
  std::vector<bool> phase_;  // true: last assigned positive
  LitVec trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  VarHeap order_{activity_};

  RestartPolicy restart_;
  std::uint64_t next_reduce_ = 0;
  std::uint64_t reduce_interval_ = 0;
  ClauseRef pending_conflict_ = kNoClause;

  std::vector<char> seen_;
  LitVec analyze_stack_;
  LitVec analyze_clear_;
  mutable std::vector<std::uint64_t> level_stamp_;
  mutable std::uint64_t stamp_ = 0;

  bool probing_ = false;
  ClauseRef ignored_ = kNoClause;

  Stats stats_;
  std::vector<bool> model_;
  SearchHooks* hooks_ = nullptr;
  TraceSink trace_;
  std::size_t worker_ = 0;
  std::uint64_t next_id_ = 1;
};

}  // namespace vivipar
