// Tabular results, registered checks and their CSV/JSON serialization.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fecand {

// Fixed numeric formatting shared by every table ("%.9g").
std::string fmt(double v);
std::string fmt(long long v);
inline std::string fmt(int v) { return fmt(static_cast<long long>(v)); }

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string to_csv() const;
  // Column as doubles; throws if the column does not exist.
  std::vector<double> column(const std::string& name) const;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  std::string id;
  std::string digest;  // hex digest of the inputs (configuration + seed)
  std::vector<Table> tables;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> metrics;

  bool all_passed() const;
  void check(const std::string& name, bool passed, const std::string& detail = "");
  void metric(const std::string& name, double value) { metrics.emplace_back(name, value); }
  const Table& table(const std::string& name) const;
  double metric_value(const std::string& name) const;
  // Summary with checks and metrics; tables are referenced by name only.
  std::string summary_json() const;
};

// 64-bit FNV-1a, printed as 16 hex digits.
std::string digest_of(const std::string& text);

}  // namespace fecand
