#include "vivipar/stats.hpp"

namespace vivipar {

Stats& Stats::operator+=(const Stats& o) {
  propagations_total += o.propagations_total;
  propagations_vivify += o.propagations_vivify;
  vivify_attempts += o.vivify_attempts;
  vivify_successes += o.vivify_successes;
  literals_removed += o.literals_removed;
  clauses_learned += o.clauses_learned;
  clauses_exported += o.clauses_exported;
  clauses_imported += o.clauses_imported;
  improvements_published += o.improvements_published;
  improvements_adopted += o.improvements_adopted;
  restarts += o.restarts;
  reductions += o.reductions;
  conflicts += o.conflicts;
  buffer_overflows += o.buffer_overflows;
  decisions += o.decisions;
  return *this;
}

double Stats::vivify_prop_pct() const {
  if (propagations_total == 0) return 0.0;
  return 100.0 * static_cast<double>(propagations_vivify) / static_cast<double>(propagations_total);
}

double Stats::success_rate() const {
  if (vivify_attempts == 0) return 0.0;
  return static_cast<double>(vivify_successes) / static_cast<double>(vivify_attempts);
}

bool Stats::consistent() const {
  return propagations_vivify <= propagations_total && vivify_successes <= vivify_attempts &&
         improvements_published <= vivify_successes;
}

}  // namespace vivipar
