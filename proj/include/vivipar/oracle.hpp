#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vivipar/formula.hpp"
#include "vivipar/literal.hpp"

namespace vivipar {

/// True iff every clause has a true literal. `model[v]` is the value of
/// variable v (index 0 unused); a short model fails.
bool verify_model(const Formula& formula, const std::vector<bool>& model);

inline constexpr std::size_t kBruteForceMaxVars = 25;

class TooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BruteForceResult {
  bool sat = false;
  std::vector<bool> model;  // first satisfying assignment in enumeration order
};

/// Exhaustive enumeration over all 2^n assignments. Throws TooLarge for n > 25.
BruteForceResult brute_force(const Formula& formula);

/// formula |= clause, by enumerating the assignments that falsify `clause`.
bool implied(const Formula& formula, const LitVec& clause);
/// (formula AND extra) |= clause.
bool implied(const Formula& formula, const std::vector<LitVec>& extra, const LitVec& clause);

}  // namespace vivipar
