#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <vector>

namespace vivipar {

/// Variables are numbered densely from 1, as in DIMACS.
using Var = std::uint32_t;

/// A literal packs (variable, polarity) into one code: 2 * var + negated.
/// The code doubles as an index into per-literal arrays of size 2 * (num_vars + 1).
class Lit {
 public:
  constexpr Lit() = default;

  static constexpr Lit make(Var v, bool negated) { return Lit((v << 1) | (negated ? 1u : 0u)); }
  static constexpr Lit positive(Var v) { return make(v, false); }
  static constexpr Lit negative(Var v) { return make(v, true); }
  static Lit from_dimacs(int value) {
    return make(static_cast<Var>(std::abs(value)), value < 0);
  }
  static constexpr Lit from_code(std::uint32_t code) { return Lit(code); }

  [[nodiscard]] constexpr Var var() const { return code_ >> 1; }
  [[nodiscard]] constexpr bool negated() const { return (code_ & 1u) != 0; }
  [[nodiscard]] constexpr std::uint32_t code() const { return code_; }
  [[nodiscard]] int to_dimacs() const {
    return negated() ? -static_cast<int>(var()) : static_cast<int>(var());
  }

  constexpr Lit operator~() const { return Lit(code_ ^ 1u); }
  constexpr auto operator<=>(const Lit&) const = default;

 private:
  constexpr explicit Lit(std::uint32_t code) : code_(code) {}
  std::uint32_t code_ = 0;
};

using LitVec = std::vector<Lit>;

/// Three-valued assignment of a literal or variable.
enum class Value : std::uint8_t { False = 0, True = 1, Unassigned = 2 };

constexpr Value negate(Value v) {
  return v == Value::Unassigned ? v : (v == Value::True ? Value::False : Value::True);
}

/// Literal vector in DIMACS integers, handy for tests and bindings.
std::vector<int> to_dimacs(const LitVec& lits);
LitVec from_dimacs(const std::vector<int>& values);

}  // namespace vivipar
