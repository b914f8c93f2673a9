#include "vivipar/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace vivipar {

std::vector<int> to_dimacs(const LitVec& lits) {
  std::vector<int> out;
  out.reserve(lits.size());
  for (Lit l : lits) out.push_back(l.to_dimacs());
  return out;
}

LitVec from_dimacs(const std::vector<int>& values) {
  LitVec out;
  out.reserve(values.size());
  for (int v : values) out.push_back(Lit::from_dimacs(v));
  return out;
}

NormalizedClause normalize_clause(LitVec lits) {
  if (lits.empty()) return {NormalizeKind::Empty, {}};
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  // Sorted by code, so l and ~l are adjacent.
  for (std::size_t i = 1; i < lits.size(); ++i) {
    if (lits[i - 1].var() == lits[i].var()) return {NormalizeKind::Tautology, {}};
  }
  return {NormalizeKind::Clause, std::move(lits)};
}

ParseError::ParseError(Kind kind, std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

namespace {

class DimacsReader {
 public:
  DimacsReader(std::istream& in, std::vector<std::string>* warnings) : in_(in), warnings_(warnings) {}

  Formula read() {
    std::string line;
    bool have_header = false;
    std::size_t declared_clauses = 0;
    std::size_t read_clauses = 0;
    LitVec current;
    bool open_clause = false;
    std::size_t open_line = 0;

    while (std::getline(in_, line)) {
      ++line_no_;
      std::string_view view = trim(line);
      if (view.empty() || view.front() == 'c') continue;
      if (view.front() == '%') break;
      if (view.front() == 'p') {
        if (have_header) throw ParseError(ParseError::Kind::BadToken, line_no_, "duplicate header");
        parse_header(view, declared_clauses);
        have_header = true;
        continue;
      }
      if (!have_header) {
        throw ParseError(ParseError::Kind::MissingHeader, line_no_, "clause data before 'p cnf' header");
      }
      std::size_t pos = 0;
      while (pos < view.size()) {
        while (pos < view.size() && std::isspace(static_cast<unsigned char>(view[pos]))) ++pos;
        if (pos >= view.size()) break;
        std::size_t end = pos;
        while (end < view.size() && !std::isspace(static_cast<unsigned char>(view[end]))) ++end;
        const int value = parse_int(view.substr(pos, end - pos));
        pos = end;
        if (value == 0) {
          ++read_clauses;
          add_clause(std::move(current));
          current.clear();
          open_clause = false;
          continue;
        }
        if (static_cast<std::size_t>(std::abs(static_cast<long long>(value))) > formula_.num_vars) {
          throw ParseError(ParseError::Kind::LiteralOutOfRange, line_no_,
                           "literal " + std::to_string(value) + " exceeds declared variable count " +
                               std::to_string(formula_.num_vars));
        }
        if (!open_clause) open_line = line_no_;
        open_clause = true;
        current.push_back(Lit::from_dimacs(value));
      }
    }
    if (!have_header) throw ParseError(ParseError::Kind::MissingHeader, line_no_, "missing 'p cnf' header");
    if (open_clause) {
      throw ParseError(ParseError::Kind::UnterminatedClause, open_line, "clause not terminated by 0");
    }
    if (read_clauses > declared_clauses) {
      warn("read " + std::to_string(read_clauses) + " clauses, header declared " +
           std::to_string(declared_clauses));
    } else if (read_clauses < declared_clauses) {
      warn("header declared " + std::to_string(declared_clauses) + " clauses, only " +
           std::to_string(read_clauses) + " present");
    }
    return std::move(formula_);
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }

  int parse_int(std::string_view token) const {
    int value = 0;
    const char* first = token.data();
    if (!token.empty() && token.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw ParseError(ParseError::Kind::BadToken, line_no_, "bad token '" + std::string(token) + "'");
    }
    return value;
  }

  void parse_header(std::string_view view, std::size_t& declared_clauses) {
    std::istringstream header{std::string(view)};
    std::string p, cnf;
    long long vars = -1, clauses = -1;
    header >> p >> cnf >> vars >> clauses;
    if (p != "p" || cnf != "cnf" || vars < 0 || clauses < 0) {
      throw ParseError(ParseError::Kind::MissingHeader, line_no_, "malformed header '" + std::string(view) + "'");
    }
    formula_.num_vars = static_cast<std::size_t>(vars);
    declared_clauses = static_cast<std::size_t>(clauses);
  }

  void add_clause(LitVec lits) {
    NormalizedClause n = normalize_clause(std::move(lits));
    switch (n.kind) {
      case NormalizeKind::Clause:
        formula_.clauses.push_back(std::move(n.lits));
        break;
      case NormalizeKind::Empty:
        formula_.trivially_unsat = true;
        break;
      case NormalizeKind::Tautology:
        break;
    }
  }

  void warn(std::string message) {
    if (warnings_ != nullptr) warnings_->push_back(std::move(message));
  }

  std::istream& in_;
  std::vector<std::string>* warnings_;
  Formula formula_;
  std::size_t line_no_ = 0;
};

}  // namespace

Formula parse_dimacs(std::istream& in, std::vector<std::string>* warnings) {
  return DimacsReader(in, warnings).read();
}

Formula parse_dimacs(std::string_view text, std::vector<std::string>* warnings) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in, warnings);
}

Formula parse_dimacs_file(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_dimacs(in, warnings);
}

std::string to_dimacs(const Formula& formula) {
  std::ostringstream out;
  out << "p cnf " << formula.num_vars << ' '
      << formula.clauses.size() + (formula.trivially_unsat ? 1 : 0) << '\n';
  for (const LitVec& clause : formula.clauses) {
    for (Lit l : clause) out << l.to_dimacs() << ' ';
    out << "0\n";
  }
  if (formula.trivially_unsat) out << "0\n";
  return out.str();
}

}  // namespace vivipar
