#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vivipar/literal.hpp"

namespace vivipar {

/// CNF problem. Clauses are normalized: sorted by literal code, no duplicates,
/// no tautologies. An empty input clause is not stored; it sets `trivially_unsat`.
struct Formula {
  std::size_t num_vars = 0;
  std::vector<LitVec> clauses;
  bool trivially_unsat = false;

  bool operator==(const Formula&) const = default;
};

enum class NormalizeKind { Clause, Tautology, Empty };

struct NormalizedClause {
  NormalizeKind kind = NormalizeKind::Empty;
  LitVec lits;
};

/// Sorts and deduplicates; reports tautologies and empty clauses.
NormalizedClause normalize_clause(LitVec lits);

class ParseError : public std::runtime_error {
 public:
  enum class Kind { MissingHeader, LiteralOutOfRange, UnterminatedClause, BadToken };

  ParseError(Kind kind, std::size_t line, const std::string& what);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

/// Parses competition-flavoured DIMACS CNF. Accepts "c" comment lines and the
/// SATLIB "%" terminator. Clauses beyond the declared count are kept and a
/// warning is appended to `warnings` when it is non-null.
Formula parse_dimacs(std::istream& in, std::vector<std::string>* warnings = nullptr);
Formula parse_dimacs(std::string_view text, std::vector<std::string>* warnings = nullptr);
Formula parse_dimacs_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

/// Emits "p cnf" header plus one line per clause.
std::string to_dimacs(const Formula& formula);

}  // namespace vivipar
