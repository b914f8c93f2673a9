#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdlib>
#include <sstream>

#include "vivipar/formula.hpp"
#include "vivipar/generator.hpp"
#include "vivipar/oracle.hpp"
#include "vivipar/portfolio.hpp"
#include "vivipar/run_record.hpp"

namespace py = pybind11;
using namespace vivipar;

namespace {

Formula make_formula(std::size_t num_vars, const std::vector<std::vector<int>>& clauses) {
  Formula f;
  f.num_vars = num_vars;
  for (const auto& c : clauses) {
    for (int v : c) {
      if (v == 0 || static_cast<std::size_t>(std::abs(v)) > num_vars) {
        throw py::value_error("literal " + std::to_string(v) + " out of range");
      }
    }
    NormalizedClause n = normalize_clause(from_dimacs(c));
    if (n.kind == NormalizeKind::Empty) f.trivially_unsat = true;
    if (n.kind == NormalizeKind::Clause) f.clauses.push_back(std::move(n.lits));
  }
  return f;
}

std::vector<std::vector<int>> clauses_of(const Formula& f) {
  std::vector<std::vector<int>> out;
  out.reserve(f.clauses.size());
  for (const LitVec& c : f.clauses) out.push_back(to_dimacs(c));
  return out;
}

std::vector<int> model_to_lits(const std::vector<bool>& model, std::size_t num_vars) {
  std::vector<int> out;
  for (std::size_t v = 1; v <= num_vars && v < model.size(); ++v) {
    out.push_back(model[v] ? static_cast<int>(v) : -static_cast<int>(v));
  }
  return out;
}

std::vector<bool> lits_to_model(const std::vector<int>& lits, std::size_t num_vars) {
  std::vector<bool> model(num_vars + 1, false);
  std::vector<bool> seen(num_vars + 1, false);
  for (int l : lits) {
    const auto v = static_cast<std::size_t>(std::abs(l));
    if (l == 0 || v > num_vars) throw py::value_error("literal " + std::to_string(l) + " out of range");
    model[v] = l > 0;
    seen[v] = true;
  }
  for (std::size_t v = 1; v <= num_vars; ++v) {
    if (!seen[v]) return {};  // a partial assignment fails verification
  }
  return model;
}

py::dict stats_dict(const Stats& s) {
  py::dict d;
  d["conflicts"] = s.conflicts;
  d["decisions"] = s.decisions;
  d["propagations_total"] = s.propagations_total;
  d["propagations_vivify"] = s.propagations_vivify;
  d["vivify_attempts"] = s.vivify_attempts;
  d["vivify_successes"] = s.vivify_successes;
  d["literals_removed"] = s.literals_removed;
  d["clauses_learned"] = s.clauses_learned;
  d["clauses_exported"] = s.clauses_exported;
  d["clauses_imported"] = s.clauses_imported;
  d["improvements_published"] = s.improvements_published;
  d["improvements_adopted"] = s.improvements_adopted;
  d["restarts"] = s.restarts;
  d["reductions"] = s.reductions;
  d["buffer_overflows"] = s.buffer_overflows;
  d["vivify_prop_pct"] = s.vivify_prop_pct();
  d["success_rate"] = s.success_rate();
  return d;
}

py::dict solve(const Formula& formula, const std::string& mode, std::uint32_t ecm_max_lbd, std::size_t threads,
               std::uint64_t seed, bool deterministic, double time_limit, std::uint64_t conflict_budget) {
  PortfolioConfig config;
  try {
    config.mode = LcmMode::parse(mode, ecm_max_lbd);
  } catch (const std::invalid_argument& e) {
    throw py::value_error(e.what());
  }
  config.num_workers = threads;
  config.seed = seed;
  config.deterministic = deterministic;
  config.time_limit_seconds = time_limit;
  config.conflict_budget = conflict_budget;
  PortfolioResult r;
  {
    py::gil_scoped_release release;
    r = run(formula, config);
  }
  py::dict out;
  out["status"] = to_string(r.status);
  out["model"] = r.status == SolveStatus::Sat ? py::cast(model_to_lits(r.model, formula.num_vars)) : py::none();
  out["winner"] = r.winner ? py::cast(*r.winner) : py::none();
  out["mode"] = r.mode.label();
  out["wall_seconds"] = deterministic ? py::none() : py::cast(r.wall_seconds);
  out["stats"] = stats_dict(r.total());
  py::list workers;
  for (const Stats& s : r.worker_stats) workers.append(stats_dict(s));
  out["worker_stats"] = workers;
  RunRecord record{"", r.mode.label(), threads, to_string(r.status),
                   deterministic ? std::nullopt : std::optional<double>(r.wall_seconds), r.total()};
  std::ostringstream csv;
  write_csv(csv, {record});
  out["csv"] = csv.str();
  return out;
}

}  // namespace

PYBIND11_MODULE(_vivipar, m) {
  m.doc() = "Portfolio CDCL solver with learned-clause minimization";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<TooLarge>(m, "TooLarge", PyExc_ValueError);

  py::class_<Formula>(m, "Formula")
      .def(py::init(&make_formula), py::arg("num_vars"), py::arg("clauses"))
      .def_readonly("num_vars", &Formula::num_vars)
      .def_readonly("trivially_unsat", &Formula::trivially_unsat)
      .def_property_readonly("clauses", &clauses_of)
      .def("to_dimacs", [](const Formula& f) { return to_dimacs(f); })
      .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; })
      .def("__len__", [](const Formula& f) { return f.clauses.size(); })
      .def("__repr__", [](const Formula& f) {
        return "Formula(num_vars=" + std::to_string(f.num_vars) + ", clauses=" + std::to_string(f.clauses.size()) +
               ")";
      });

  m.def(
      "parse_dimacs", [](const std::string& text) { return parse_dimacs(std::string_view(text)); }, py::arg("text"));
  m.def(
      "parse_dimacs_file", [](const std::string& path) { return parse_dimacs_file(path); }, py::arg("path"));

  m.def("solve", &solve, py::arg("formula"), py::kw_only(), py::arg("mode") = "none", py::arg("ecm_max_lbd") = 3,
        py::arg("threads") = 1, py::arg("seed") = 0, py::arg("deterministic") = false, py::arg("time_limit") = 0.0,
        py::arg("conflict_budget") = 0);

  m.def(
      "brute_force",
      [](const Formula& f) {
        const BruteForceResult r = brute_force(f);
        return py::make_tuple(r.sat, r.sat ? py::cast(model_to_lits(r.model, f.num_vars)) : py::none());
      },
      py::arg("formula"));
  m.def(
      "verify_model",
      [](const Formula& f, const std::vector<int>& lits) { return verify_model(f, lits_to_model(lits, f.num_vars)); },
      py::arg("formula"), py::arg("model"));
  m.def(
      "implied",
      [](const Formula& f, const std::vector<int>& clause) { return implied(f, from_dimacs(clause)); },
      py::arg("formula"), py::arg("clause"));

  m.def("gen_random_3sat", &gen_random_3sat, py::arg("n"), py::arg("m"), py::arg("seed"));
  m.def("phase_transition_clauses", &phase_transition_clauses, py::arg("n"));
  m.def("pigeonhole", &pigeonhole, py::arg("pigeons"), py::arg("holes"));
  m.def("csv_columns", &csv_columns);
  m.def("default_num_workers", &default_num_workers);
}
