#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "vivipar/literal.hpp"

namespace vivipar {

enum class TraceKind {
  Learned,    // clause stored after conflict analysis
  Withheld,   // ECM: learned clause held back from export
  Attempted,  // vivification attempt finished (any outcome)
  Exported,   // clause handed to the shared pool
  Imported,   // clause received from another worker
  Vivified,   // vivification changed a clause; `before` holds the original
  Reduced,    // clause deleted by database reduction
  Published,  // LPCM improvement written to a link cell
  Adopted,    // LPCM improvement swapped into an imported copy
};

/// Event emitted by engines and strategies when a trace sink is installed.
/// Used by the protocol checks; never needed for solving.
struct TraceEvent {
  TraceKind kind = TraceKind::Learned;
  std::size_t worker = 0;
  std::uint64_t clause_id = 0;
  LitVec lits;
  LitVec before;
  std::uint32_t lbd = 0;
  std::uint32_t learn_lbd = 0;
  bool vivify_attempted = false;
  bool reduce_protected = false;
};

using TraceSink = std::function<void(const TraceEvent&)>;

}  // namespace vivipar
