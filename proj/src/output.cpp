#include "fecand/output.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace fecand {

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string svg_line_chart(const Table& table, const ChartSpec& spec) {
  constexpr double kW = 640, kH = 400, kL = 70, kR = 20, kT = 30, kB = 50;
  const std::vector<double> xs = table.column(spec.x);
  std::vector<std::string> groups(table.rows.size());
  if (!spec.group.empty()) {
    const auto it = std::find(table.header.begin(), table.header.end(), spec.group);
    if (it == table.header.end()) throw std::out_of_range("chart: no column " + spec.group);
    const size_t g = static_cast<size_t>(it - table.header.begin());
    for (size_t i = 0; i < table.rows.size(); ++i) groups[i] = table.rows[i][g];
  }

  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  std::map<std::string, size_t> index;
  for (const auto& col : spec.y) {
    const std::vector<double> ys = table.column(col);
    for (size_t i = 0; i < ys.size(); ++i) {
      double y = ys[i];
      if (spec.log_y) {
        if (!(y > 0.0)) continue;
        y = std::log10(y);
      }
      if (!std::isfinite(y) || !std::isfinite(xs[i])) continue;
      const std::string name = groups[i].empty() ? col : col + " (" + groups[i] + ")";
      auto [it, fresh] = index.emplace(name, series.size());
      if (fresh) series.push_back({name, {}});
      series[it->second].pts.emplace_back(xs[i], y);
    }
  }

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (const auto& [x, y] : s.pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  auto px = [&](double x) { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); };
  auto py = [&](double y) { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kW) +
                    "\" height=\"" + fmt(kH) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + fmt(kL) + "\" y1=\"" + fmt(kH - kB) + "\" x2=\"" + fmt(kW - kR) +
         "\" y2=\"" + fmt(kH - kB) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(kL) + "\" y1=\"" + fmt(kT) + "\" x2=\"" + fmt(kL) + "\" y2=\"" +
         fmt(kH - kB) + "\" stroke=\"black\"/>\n";
  auto text = [&](double x, double y, const std::string& s, const char* anchor) {
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"" + anchor + "\">" +
           s + "</text>\n";
  };
  text(kL, kH - kB + 15, fmt(x0), "middle");
  text(kW - kR, kH - kB + 15, fmt(x1), "middle");
  text((kL + kW - kR) / 2, kH - 10, spec.x, "middle");
  const std::string ylab = spec.log_y ? "log10 " : "";
  text(kL - 5, py(y0), fmt(y0), "end");
  text(kL - 5, py(y1) + 4, fmt(y1), "end");
  text(kL, kT - 12, table.name, "start");
  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % (sizeof colors / sizeof colors[0])];
    std::string pts;
    for (const auto& [x, y] : series[s].pts) pts += fmt(px(x)) + "," + fmt(py(y)) + " ";
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" points=\"" + pts +
           "\"/>\n";
    svg += "<text x=\"" + fmt(kW - kR - 5) + "\" y=\"" + fmt(kT + 14.0 * (s + 1)) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" fill=\"" +
           color + "\">" + ylab + series[s].name + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<std::string> write_report(const ExperimentReport& report, const std::string& dir,
                                      const std::vector<ChartSpec>& charts) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (const auto& t : report.tables) {
    write_text_file(dir + "/" + t.name + ".csv", t.to_csv());
    files.push_back(t.name + ".csv");
  }
  for (const auto& c : charts) {
    const std::string name = c.table + "_" + c.y.front() + ".svg";
    write_text_file(dir + "/" + name, svg_line_chart(report.table(c.table), c));
    files.push_back(name);
  }
  write_text_file(dir + "/" + report.id + ".json", report.summary_json());
  files.push_back(report.id + ".json");
  return files;
}

}  // namespace fecand
