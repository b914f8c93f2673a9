#pragma once

#include <cstdint>

namespace vivipar {

/// Per-worker counters. Merged only after a run terminates.
struct Stats {
  std::uint64_t propagations_total = 0;
  std::uint64_t propagations_vivify = 0;
  std::uint64_t vivify_attempts = 0;
  std::uint64_t vivify_successes = 0;
  std::uint64_t literals_removed = 0;
  std::uint64_t clauses_learned = 0;
  std::uint64_t clauses_exported = 0;
  std::uint64_t clauses_imported = 0;
  std::uint64_t improvements_published = 0;
  std::uint64_t improvements_adopted = 0;
  std::uint64_t restarts = 0;
  std::uint64_t reductions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t buffer_overflows = 0;
  std::uint64_t decisions = 0;

  Stats& operator+=(const Stats& other);
  bool operator==(const Stats&) const = default;

  /// Share of propagations spent inside vivification, in percent.
  [[nodiscard]] double vivify_prop_pct() const;
  /// successes / attempts, 0 when nothing was attempted.
  [[nodiscard]] double success_rate() const;
  /// Checks the counter relations that must hold for any run.
  [[nodiscard]] bool consistent() const;
};

}  // namespace vivipar
