#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vivipar/formula.hpp"
#include "vivipar/oracle.hpp"
#include "vivipar/portfolio.hpp"
#include "vivipar/run_record.hpp"
#include "vivipar/strategy.hpp"

namespace {

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitUnknown = 0;
constexpr int kExitError = 1;

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("VIVIPAR_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long value = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return value;
  } catch (const std::exception&) {
    throw CLI::ValidationError("VIVIPAR_SEED", std::string("not an unsigned integer: ") + raw);
  }
}

void print_model(const std::vector<bool>& model, std::size_t num_vars) {
  std::string line = "v";
  for (std::size_t v = 1; v <= num_vars; ++v) {
    std::string lit = " " + std::string(model[v] ? "" : "-") + std::to_string(v);
    if (line.size() + lit.size() > 78) {
      std::cout << line << '\n';
      line = "v";
    }
    line += lit;
  }
  std::cout << line << " 0\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel portfolio CDCL SAT solver with learned clause minimization"};

  std::string input;
  std::string lcm = "none";
  std::uint32_t ecm_max_lbd = 3;
  std::size_t threads = vivipar::default_num_workers();
  std::uint64_t seed = 0;
  bool deterministic = false;
  double time_limit = 60.0;
  std::string stats_csv;
  std::uint32_t export_max_lbd = vivipar::ExportFilter{}.max_lbd;

  app.add_option("input", input, "DIMACS CNF file")->required()->check(CLI::ExistingFile);
  app.add_option("--lcm", lcm, "Learned clause minimization mode")
      ->check(CLI::IsMember({"none", "pcm", "lpcm", "ecm"}))
      ->capture_default_str();
  auto* ecm_opt = app.add_option("--ecm-max-lbd", ecm_max_lbd, "ECM withholds clauses with LBD <= N")
                      ->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "Number of workers")->check(CLI::PositiveNumber)->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Diversification seed (falls back to VIVIPAR_SEED)");
  app.add_flag("--deterministic", deterministic, "Single-threaded round-robin schedule");
  app.add_option("--time-limit", time_limit, "Wall-clock limit in seconds, 0 for none")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--stats-csv", stats_csv, "Write a stats CSV row to PATH");
  app.add_option("--export-max-lbd", export_max_lbd, "Largest LBD accepted for export")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (ecm_opt->count() > 0 && lcm != "ecm") {
      throw CLI::ValidationError("--ecm-max-lbd", "requires --lcm=ecm");
    }
    if (seed_opt->count() == 0) seed = env_seed().value_or(0);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kExitError;
  }

  vivipar::Formula formula;
  try {
    std::vector<std::string> warnings;
    formula = vivipar::parse_dimacs_file(input, &warnings);
    for (const auto& w : warnings) std::cout << "c warning: " << w << '\n';
  } catch (const vivipar::ParseError& e) {
    std::cerr << input << ": " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << input << ": " << e.what() << '\n';
    return kExitError;
  }

  vivipar::PortfolioConfig config;
  config.num_workers = threads;
  config.seed = seed;
  config.mode = vivipar::LcmMode::parse(lcm, ecm_max_lbd);
  config.filter.max_lbd = export_max_lbd;
  config.time_limit_seconds = time_limit;
  config.deterministic = deterministic;

  vivipar::PortfolioResult result;
  try {
    result = vivipar::run(formula, config);
  } catch (const vivipar::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }

  if (!stats_csv.empty()) {
    vivipar::RunRecord record;
    record.instance = std::filesystem::path(input).filename().string();
    record.mode = result.mode.label();
    record.workers = threads;
    record.status = vivipar::to_string(result.status);
    if (!deterministic) record.wall_seconds = result.wall_seconds;
    record.stats = result.total();
    try {
      vivipar::emit_csv({record}, stats_csv);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitError;
    }
  }

  switch (result.status) {
    case vivipar::SolveStatus::Sat:
      if (!vivipar::verify_model(formula, result.model)) {
        std::cerr << "internal error: model does not satisfy the formula\n";
        return kExitError;
      }
      std::cout << "s SATISFIABLE\n";
      print_model(result.model, formula.num_vars);
      return kExitSat;
    case vivipar::SolveStatus::Unsat:
      std::cout << "s UNSATISFIABLE\n";
      return kExitUnsat;
    case vivipar::SolveStatus::Unknown:
      break;
  }
  std::cout << "s UNKNOWN\n";
  return kExitUnknown;
}
