#pragma once

#include <cstddef>
#include <cstdint>

#include "vivipar/formula.hpp"

namespace vivipar {

/// Uniform random 3-SAT: m clauses over 3 distinct variables with uniform
/// polarities. Reproducible from `seed`. Requires n >= 3.
Formula gen_random_3sat(std::size_t n, std::size_t m, std::uint64_t seed);

/// Clause count at the 3-SAT phase transition (m/n ~ 4.26), rounded.
std::size_t phase_transition_clauses(std::size_t n);

/// Pigeonhole principle: `pigeons` pigeons into `holes` holes.
Formula pigeonhole(std::size_t pigeons, std::size_t holes);

}  // namespace vivipar
