#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vivipar/stats.hpp"

namespace vivipar {

/// One (instance, mode) run in the stats CSV.
struct RunRecord {
  std::string instance;
  std::string mode;
  std::size_t workers = 1;
  std::string status;
  // Absent for deterministic runs so that their CSV is reproducible ("NA").
  std::optional<double> wall_seconds;
  Stats stats;

  bool operator==(const RunRecord&) const = default;
};

/// Column names in emission order.
const std::vector<std::string>& csv_columns();

/// Header plus one row per record. Percentages use two decimals, the success
/// rate (a fraction) four.
void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
/// Writes to `path`; throws std::runtime_error on I/O failure.
void emit_csv(const std::vector<RunRecord>& records, const std::string& path);
/// Inverse of write_csv; derived columns are ignored. Throws std::runtime_error.
std::vector<RunRecord> read_csv(std::istream& in);

}  // namespace vivipar
