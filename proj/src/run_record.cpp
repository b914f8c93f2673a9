#include "vivipar/run_record.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vivipar {

namespace {

using Counter = std::uint64_t Stats::*;

struct CounterColumn {
  const char* name;
  Counter field;
};

constexpr std::array<CounterColumn, 15> kCounters{{
    {"conflicts", &Stats::conflicts},
    {"decisions", &Stats::decisions},
    {"propagations_total", &Stats::propagations_total},
    {"propagations_vivify", &Stats::propagations_vivify},
    {"vivify_attempts", &Stats::vivify_attempts},
    {"vivify_successes", &Stats::vivify_successes},
    {"literals_removed", &Stats::literals_removed},
    {"clauses_learned", &Stats::clauses_learned},
    {"clauses_exported", &Stats::clauses_exported},
    {"clauses_imported", &Stats::clauses_imported},
    {"improvements_published", &Stats::improvements_published},
    {"improvements_adopted", &Stats::improvements_adopted},
    {"restarts", &Stats::restarts},
    {"reductions", &Stats::reductions},
    {"buffer_overflows", &Stats::buffer_overflows},
}};

constexpr std::size_t kLeading = 5;  // instance, mode, workers, status, wall_seconds

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string shortest(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

template <typename T>
T parse_number(const std::string& text, const char* column) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::runtime_error(std::string("bad value for ") + column + ": '" + text + "'");
  }
  return value;
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = [] {
    std::vector<std::string> c{"instance", "mode", "workers", "status", "wall_seconds"};
    for (const CounterColumn& col : kCounters) c.emplace_back(col.name);
    c.emplace_back("vivify_prop_pct");
    c.emplace_back("success_rate");
    return c;
  }();
  return columns;
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  const auto& columns = csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i == 0 ? "" : ",") << columns[i];
  out << '\n';
  for (const RunRecord& r : records) {
    out << quote(r.instance) << ',' << quote(r.mode) << ',' << r.workers << ',' << quote(r.status) << ','
        << (r.wall_seconds ? shortest(*r.wall_seconds) : std::string("NA"));
    for (const CounterColumn& col : kCounters) out << ',' << r.stats.*(col.field);
    out << ',' << fixed(r.stats.vivify_prop_pct(), 2) << ',' << fixed(r.stats.success_rate(), 4) << '\n';
  }
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(out, records);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<RunRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty stats csv");
  if (split_row(line) != csv_columns()) throw std::runtime_error("unexpected stats csv header");
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_row(line);
    if (f.size() != csv_columns().size()) throw std::runtime_error("stats csv row has wrong arity");
    RunRecord r;
    r.instance = f[0];
    r.mode = f[1];
    r.workers = parse_number<std::size_t>(f[2], "workers");
    r.status = f[3];
    if (f[4] != "NA") r.wall_seconds = parse_number<double>(f[4], "wall_seconds");
    for (std::size_t i = 0; i < kCounters.size(); ++i) {
      r.stats.*(kCounters[i].field) = parse_number<std::uint64_t>(f[kLeading + i], kCounters[i].name);
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace vivipar
