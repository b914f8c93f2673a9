#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vivipar/engine.hpp"
#include "vivipar/exchange.hpp"
#include "vivipar/formula.hpp"
#include "vivipar/stats.hpp"
#include "vivipar/strategy.hpp"
#include "vivipar/trace.hpp"

namespace vivipar {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kMaxDefaultWorkers = 34;

/// Hardware concurrency capped at kMaxDefaultWorkers, at least 1.
std::size_t default_num_workers();

struct PortfolioConfig {
  std::size_t num_workers = 1;
  std::uint64_t seed = 0;
  LcmMode mode;
  ExportFilter filter;
  CandidatePolicy candidates;
  std::uint64_t vivify_budget = kDefaultVivifyBudget;
  std::size_t pool_capacity = SharedPool::kDefaultCapacity;
  // Reference settings for worker 0; other workers are derived by diversify().
  EngineConfig engine;
  // 0 disables the limit.
  double time_limit_seconds = 0.0;
  // Conflicts per worker; 0 disables the limit.
  std::uint64_t conflict_budget = 0;
  // Single thread, round-robin turns of `quantum` conflicts per worker.
  bool deterministic = false;
  std::uint64_t quantum = 512;
  // Optional protocol trace; calls are serialized by the portfolio.
  TraceSink trace;
};

/// Worker configuration derived from (index, seed). Worker 0 is the reference
/// setup with dynamic restarts; odd workers use Luby restarts and the inverted
/// initial phase; workers >= 1 get a VSIDS decay in [0.85, 0.99) and a seeded
/// activity perturbation.
EngineConfig diversify(std::size_t worker_index, std::uint64_t seed, const EngineConfig& base = {});

struct PortfolioResult {
  SolveStatus status = SolveStatus::Unknown;
  std::vector<bool> model;  // indexed by variable, valid for Sat
  std::optional<std::size_t> winner;
  double wall_seconds = 0.0;
  LcmMode mode;
  std::vector<Stats> worker_stats;

  [[nodiscard]] Stats total() const;
};

/// Runs the portfolio; throws ConfigError on an invalid configuration.
/// A Sat model is checked against the formula before it is returned.
PortfolioResult run(const Formula& formula, const PortfolioConfig& config);

}  // namespace vivipar
