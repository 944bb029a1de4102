// Writes reports to disk: one CSV per table, a JSON summary and optional
// SVG line charts.
#pragma once

#include <string>
#include <vector>

#include "fecand/report.hpp"

namespace fecand {

struct ChartSpec {
  std::string table;
  std::string x;
  std::vector<std::string> y;
  bool log_y = false;
  std::string group;  // optional column splitting rows into series
};

// Self-contained SVG line chart of the named columns.
std::string svg_line_chart(const Table& table, const ChartSpec& spec);

// Writes <dir>/<table>.csv for each table and <dir>/<id>.json. Returns the
// written file names (relative to dir).
std::vector<std::string> write_report(const ExperimentReport& report,
                                      const std::string& dir,
                                      const std::vector<ChartSpec>& charts = {});

void write_text_file(const std::string& path, const std::string& text);

}  // namespace fecand
