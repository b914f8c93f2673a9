#include "vivipar/portfolio.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <thread>

#include "vivipar/oracle.hpp"

namespace vivipar {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kLubyUnits[] = {100, 256, 512};

void validate(const PortfolioConfig& config) {
  if (config.num_workers == 0) throw ConfigError("at least one worker is required");
  if (config.deterministic && config.quantum == 0) throw ConfigError("deterministic mode needs a positive quantum");
  if (config.mode.kind == LcmKind::Ecm && config.mode.ecm_max_lbd < 1) {
    throw ConfigError("ecm max lbd must be at least 1");
  }
  if (config.time_limit_seconds < 0.0) throw ConfigError("negative time limit");
  if (config.pool_capacity == 0) throw ConfigError("pool capacity must be positive");
}

struct Worker {
  std::unique_ptr<Engine> engine;
  std::unique_ptr<Strategy> strategy;
};

}  // namespace

std::size_t default_num_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return std::clamp<std::size_t>(hw == 0 ? 1 : hw, 1, kMaxDefaultWorkers);
}

EngineConfig diversify(std::size_t worker_index, std::uint64_t seed, const EngineConfig& base) {
  EngineConfig config = base;
  if (worker_index == 0) {
    config.restart.kind = RestartKind::DynamicLbd;
    return config;
  }
  const std::uint64_t h = splitmix64(seed ^ splitmix64(worker_index));
  const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;
  const bool odd = worker_index % 2 == 1;
  config.restart.kind = odd ? RestartKind::Luby : RestartKind::DynamicLbd;
  config.restart.luby_unit = kLubyUnits[(worker_index / 2) % 3];
  config.var_decay = 0.85 + 0.14 * unit;
  config.initial_phase = odd ? !base.initial_phase : base.initial_phase;
  config.activity_seed = h | 1;
  return config;
}

Stats PortfolioResult::total() const {
  Stats sum;
  for (const Stats& s : worker_stats) sum += s;
  return sum;
}

PortfolioResult run(const Formula& formula, const PortfolioConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (config.time_limit_seconds > 0.0) {
    deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                           std::chrono::duration<double>(config.time_limit_seconds));
  }

  const std::size_t n = config.num_workers;
  std::unique_ptr<SharedPool> pool;
  if (n > 1) pool = std::make_unique<SharedPool>(n, config.pool_capacity);

  std::mutex trace_mutex;
  TraceSink sink;
  if (config.trace) {
    sink = [&trace_mutex, &config](const TraceEvent& event) {
      std::lock_guard lock(trace_mutex);
      config.trace(event);
    };
  }

  std::vector<Worker> workers(n);
  for (std::size_t i = 0; i < n; ++i) {
    StrategyConfig sc{config.mode, config.filter, config.candidates, config.vivify_budget};
    workers[i].engine = std::make_unique<Engine>(formula, diversify(i, config.seed, config.engine));
    workers[i].strategy = std::make_unique<Strategy>(sc, i, pool.get());
    workers[i].engine->set_hooks(workers[i].strategy.get());
    if (sink) workers[i].engine->set_trace(sink, i);
  }

  PortfolioResult result;
  result.mode = config.mode;

  if (config.deterministic || n == 1) {
    std::vector<bool> exhausted(n, false);
    bool done = false;
    while (!done) {
      bool progressed = false;
      for (std::size_t i = 0; i < n && !done; ++i) {
        if (exhausted[i]) continue;
        Engine& engine = *workers[i].engine;
        Budget budget;
        budget.deadline = deadline;
        std::uint64_t turn = config.deterministic ? config.quantum : 0;
        if (config.conflict_budget != 0) {
          const std::uint64_t used = engine.stats().conflicts;
          const std::uint64_t left = used >= config.conflict_budget ? 0 : config.conflict_budget - used;
          if (left == 0) {
            exhausted[i] = true;
            continue;
          }
          turn = turn == 0 ? left : std::min(turn, left);
        }
        budget.max_conflicts = turn;
        const SolveStatus status = engine.solve(budget);
        progressed = true;
        if (status != SolveStatus::Unknown) {
          result.status = status;
          result.winner = i;
          done = true;
        } else if (deadline && std::chrono::steady_clock::now() >= *deadline) {
          done = true;
        } else if (!config.deterministic && config.conflict_budget == 0) {
          done = true;  // single unbounded worker only stops at the deadline
        }
      }
      if (!progressed) done = true;
    }
  } else {
    std::atomic<bool> stop{false};
    std::atomic<int> winner{-1};
    std::vector<std::thread> threads;
    threads.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      threads.emplace_back([&, i] {
        Budget budget{config.conflict_budget, &stop, deadline};
        const SolveStatus status = workers[i].engine->solve(budget);
        if (status == SolveStatus::Unknown) return;
        int expected = -1;
        if (winner.compare_exchange_strong(expected, static_cast<int>(i))) stop.store(true);
      });
    }
    for (std::thread& t : threads) t.join();
    if (winner.load() >= 0) {
      result.winner = static_cast<std::size_t>(winner.load());
      result.status = workers[*result.winner].engine->status();
    }
  }

  if (result.status == SolveStatus::Sat) {
    result.model = workers[*result.winner].engine->model();
    if (!verify_model(formula, result.model)) throw std::logic_error("solver produced a model that fails verification");
  }
  result.worker_stats.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Stats s = workers[i].engine->stats();
    if (pool) s.buffer_overflows = pool->overflows(i);
    result.worker_stats.push_back(s);
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace vivipar
