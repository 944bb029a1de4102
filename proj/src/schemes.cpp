#include "fecand/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fecand {

namespace {

// Laid-out cell geometry in the 28 nm process: the area grows by
// pitch_y * spacing when well spacing is included, which pins pitch_y; the
// spacing-free area then gives the base column pitch.
constexpr double kCandAreaNoSpacing = 83.57;
constexpr double kCandAreaSpacingDelta = 415.2 - 83.57;
constexpr double kAndAreaNoSpacing = 244.14;
constexpr double kAndAreaSpacingDelta = 801.54 - 244.14;

std::vector<int> sorted_unique(std::span<const int> cols) {
  std::vector<int> out(cols.begin(), cols.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool contains(const std::vector<int>& v, int x) {
  return std::binary_search(v.begin(), v.end(), x);
}

BiasPlan blank_plan(const ArrayConfig& config, Operation op, double duration) {
  BiasPlan plan;
  plan.topology = config.topology;
  plan.rows = config.rows;
  plan.cols = config.cols;
  plan.op = op;
  plan.duration = duration;
  for (auto k : {LineKind::kWordLine, LineKind::kSelectLine, LineKind::kBitLine,
                 LineKind::kBulkLine}) {
    plan.of(k).assign(
        static_cast<size_t>(BiasPlan::line_count(config.topology, k, config.rows,
                                                 config.cols)),
        Drive::at(0.0));
  }
  return plan;
}

void check_row(const ArrayConfig& config, int row) {
  if (row < 0 || row >= config.rows)
    throw std::out_of_range("row index " + std::to_string(row) + " out of range");
}

void check_cols(const ArrayConfig& config, const std::vector<int>& cols) {
  if (cols.empty()) throw std::invalid_argument("empty column selection");
  if (cols.front() < 0 || cols.back() >= config.cols)
    throw std::out_of_range("column index out of range");
}

}  // namespace

const char* to_string(Topology t) { return t == Topology::kAnd ? "and" : "cand"; }

Topology topology_from_string(const std::string& name) {
  if (name == "and" || name == "AND") return Topology::kAnd;
  if (name == "cand" || name == "c-and" || name == "C-AND" || name == "C_AND")
    return Topology::kCand;
  throw std::invalid_argument("unknown topology: " + name);
}

CellPitch layout_pitch(Topology t, double bulk_spacing_lambda) {
  const double area = t == Topology::kCand ? kCandAreaNoSpacing : kAndAreaNoSpacing;
  const double delta =
      t == Topology::kCand ? kCandAreaSpacingDelta : kAndAreaSpacingDelta;
  const double y = delta / kDefaultBulkSpacing;
  return CellPitch{area / y + bulk_spacing_lambda, y};
}

ArrayConfig ArrayConfig::make(Topology t, int rows, int cols) {
  ArrayConfig c;
  c.rows = rows;
  c.cols = cols;
  c.topology = t;
  c.pitch = layout_pitch(t, kDefaultBulkSpacing);
  c.validate();
  return c;
}

void ArrayConfig::validate() const {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("array: rows and cols must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("array: lambda must be positive");
  if (!(pitch.x > 0.0) || !(pitch.y > 0.0))
    throw std::invalid_argument("array: pitch must be positive");
  const auto& p = parasitics;
  if (p.rm < 0 || p.cm < 0 || p.rp < 0 || p.cp < 0)
    throw std::invalid_argument("array: parasitics must be nonnegative");
}

const char* line_name(LineKind k) {
  switch (k) {
    case LineKind::kWordLine: return "WL";
    case LineKind::kSelectLine: return "SL";
    case LineKind::kBitLine: return "BL";
    case LineKind::kBulkLine: return "BuL";
  }
  return "?";
}

const char* to_string(Operation op) {
  switch (op) {
    case Operation::kWrite0: return "write0";
    case Operation::kWrite1: return "write1";
    case Operation::kRead: return "read";
    case Operation::kIdle: return "idle";
  }
  return "?";
}

const char* to_string(WriteScheme s) {
  switch (s) {
    case WriteScheme::kVdd3: return "vdd3";
    case WriteScheme::kVdd2: return "vdd2";
    case WriteScheme::kMixed: return "mixed";
  }
  return "?";
}

WriteScheme write_scheme_from_string(const std::string& name) {
  if (name == "vdd3" || name == "vdd3_only") return WriteScheme::kVdd3;
  if (name == "vdd2" || name == "vdd2_only") return WriteScheme::kVdd2;
  if (name == "mixed") return WriteScheme::kMixed;
  throw std::invalid_argument("unknown write scheme: " + name);
}

int BiasPlan::line_count(Topology t, LineKind k, int rows, int cols) {
  switch (k) {
    case LineKind::kWordLine: return rows;
    case LineKind::kSelectLine: return t == Topology::kCand ? rows : cols;
    case LineKind::kBitLine: return cols;
    case LineKind::kBulkLine: return t == Topology::kCand ? cols : 0;
  }
  return 0;
}

void BiasPlan::validate() const {
  for (auto k : {LineKind::kWordLine, LineKind::kSelectLine, LineKind::kBitLine,
                 LineKind::kBulkLine}) {
    if (static_cast<int>(of(k).size()) != line_count(topology, k, rows, cols))
      throw std::invalid_argument(std::string("plan: wrong number of ") +
                                  line_name(k) + " assignments");
  }
  if (op == Operation::kIdle) return;
  if (selected_row < 0 || selected_row >= rows)
    throw std::invalid_argument("plan: selected row missing");
  if (of(LineKind::kWordLine)[static_cast<size_t>(selected_row)].high_z)
    throw std::invalid_argument("plan: selected WL is high-Z");
  for (int c : selected_cols) {
    if (c < 0 || c >= cols) throw std::invalid_argument("plan: bad selected column");
    if (of(LineKind::kBitLine)[static_cast<size_t>(c)].high_z)
      throw std::invalid_argument("plan: selected BL is high-Z");
  }
  if (topology == Topology::kCand &&
      of(LineKind::kSelectLine)[static_cast<size_t>(selected_row)].high_z)
    throw std::invalid_argument("plan: selected SL is high-Z");
}

BiasPlan cand_write_bias(Operation op, int row, std::span<const int> cols_in,
                         const ArrayConfig& config, const BiasVoltages& v,
                         WriteScheme scheme) {
  if (config.topology != Topology::kCand)
    throw std::invalid_argument("cand_write_bias: topology is not C-AND");
  if (op != Operation::kWrite0 && op != Operation::kWrite1)
    throw std::invalid_argument("cand_write_bias: not a write operation");
  if (!(v.vw0 < 0.0 && v.vw1 > 0.0))
    throw std::invalid_argument("cand_write_bias: require V_W0 < 0 < V_W1");
  check_row(config, row);
  const auto cols = sorted_unique(cols_in);
  check_cols(config, cols);

  const double vw = op == Operation::kWrite0 ? v.vw0 : v.vw1;
  bool third = scheme == WriteScheme::kVdd3 ||
               (scheme == WriteScheme::kMixed && op == Operation::kWrite0);

  BiasPlan plan = blank_plan(config, op, v.t_pulse);
  plan.selected_row = row;
  plan.selected_cols = cols;
  auto& wl = plan.of(LineKind::kWordLine);
  auto& bul = plan.of(LineKind::kBulkLine);
  for (int r = 0; r < config.rows; ++r) {
    const bool sel = r == row;
    wl[static_cast<size_t>(r)] =
        Drive::at(third ? (sel ? vw : vw / 3.0) : (sel ? vw / 2.0 : 0.0));
  }
  for (int c = 0; c < config.cols; ++c) {
    const bool sel = contains(cols, c);
    bul[static_cast<size_t>(c)] =
        Drive::at(third ? (sel ? 0.0 : 2.0 * vw / 3.0) : (sel ? -vw / 2.0 : 0.0));
  }
  return plan;
}

BiasPlan cand_read_bias(int row, std::span<const int> cols_in,
                        const ArrayConfig& config, const BiasVoltages& v) {
  if (config.topology != Topology::kCand)
    throw std::invalid_argument("cand_read_bias: topology is not C-AND");
  check_row(config, row);
  const auto cols = sorted_unique(cols_in);
  check_cols(config, cols);

  BiasPlan plan = blank_plan(config, Operation::kRead, v.t_pulse);
  plan.selected_row = row;
  plan.selected_cols = cols;
  auto& wl = plan.of(LineKind::kWordLine);
  auto& sl = plan.of(LineKind::kSelectLine);
  auto& bl = plan.of(LineKind::kBitLine);
  for (int r = 0; r < config.rows; ++r) {
    wl[static_cast<size_t>(r)] = Drive::at(r == row ? v.vwl : 0.0);
    sl[static_cast<size_t>(r)] = r == row ? Drive::at(v.vsl) : Drive::hz();
  }
  for (int c = 0; c < config.cols; ++c)
    bl[static_cast<size_t>(c)] = contains(cols, c) ? Drive::at(0.0) : Drive::hz();
  return plan;
}

BiasPlan and_write_bias(Operation op, int row, int col, double vw,
                        const ArrayConfig& config, double duration) {
  if (config.topology != Topology::kAnd)
    throw std::invalid_argument("and_write_bias: topology is not AND");
  if (op != Operation::kWrite0 && op != Operation::kWrite1)
    throw std::invalid_argument("and_write_bias: not a write operation");
  check_row(config, row);
  check_cols(config, {col});

  BiasPlan plan = blank_plan(config, op, duration);
  plan.selected_row = row;
  plan.selected_cols = {col};
  auto& wl = plan.of(LineKind::kWordLine);
  for (int r = 0; r < config.rows; ++r)
    wl[static_cast<size_t>(r)] = Drive::at(r == row ? vw : vw / 3.0);
  for (int c = 0; c < config.cols; ++c) {
    const Drive d = Drive::at(c == col ? 0.0 : 2.0 * vw / 3.0);
    plan.of(LineKind::kBitLine)[static_cast<size_t>(c)] = d;
    plan.of(LineKind::kSelectLine)[static_cast<size_t>(c)] = d;
  }
  return plan;
}

BiasPlan and_read_bias(int row, int col, const ArrayConfig& config,
                       const BiasVoltages& v) {
  if (config.topology != Topology::kAnd)
    throw std::invalid_argument("and_read_bias: topology is not AND");
  check_row(config, row);
  check_cols(config, {col});

  BiasPlan plan = blank_plan(config, Operation::kRead, v.t_pulse);
  plan.selected_row = row;
  plan.selected_cols = {col};
  auto& wl = plan.of(LineKind::kWordLine);
  for (int r = 0; r < config.rows; ++r)
    wl[static_cast<size_t>(r)] = Drive::at(r == row ? v.vwl : 0.0);
  for (int c = 0; c < config.cols; ++c) {
    plan.of(LineKind::kBitLine)[static_cast<size_t>(c)] =
        c == col ? Drive::at(v.vsl) : Drive::hz();
    plan.of(LineKind::kSelectLine)[static_cast<size_t>(c)] = Drive::at(0.0);
  }
  return plan;
}

BiasPlan idle_plan(const ArrayConfig& config, double duration) {
  return blank_plan(config, Operation::kIdle, duration);
}

double cell_write_voltage(const BiasPlan& plan, int row, int col) {
  if (row < 0 || row >= plan.rows || col < 0 || col >= plan.cols)
    throw std::out_of_range("cell_write_voltage: address out of range");
  if (plan.op == Operation::kRead)
    throw std::invalid_argument("cell_write_voltage: read plan");
  const Drive& gate = plan.of(LineKind::kWordLine)[static_cast<size_t>(row)];
  if (gate.high_z)
    throw std::invalid_argument("cell_write_voltage: high-Z wordline in write plan");
  if (plan.topology == Topology::kCand) {
    const Drive& bulk = plan.of(LineKind::kBulkLine)[static_cast<size_t>(col)];
    if (bulk.high_z)
      throw std::invalid_argument("cell_write_voltage: high-Z bulk line in write plan");
    return gate.volts - bulk.volts;
  }
  const Drive& bl = plan.of(LineKind::kBitLine)[static_cast<size_t>(col)];
  const Drive& sl = plan.of(LineKind::kSelectLine)[static_cast<size_t>(col)];
  if (bl.high_z || sl.high_z)
    throw std::invalid_argument("cell_write_voltage: high-Z column in AND write plan");
  // Channel reference: mean of the two column potentials.
  return gate.volts - 0.5 * (bl.volts + sl.volts);
}

const char* to_string(CellGroup g) {
  switch (g) {
    case CellGroup::kSelected: return "SEL";
    case CellGroup::kSameRow: return "SAME_ROW";
    case CellGroup::kSameCol: return "SAME_COL";
    case CellGroup::kDiagonal: return "DIAG";
  }
  return "?";
}

CellGroup classify(int row, int col, int selected_row,
                   std::span<const int> selected_cols) {
  const bool in_row = row == selected_row;
  const bool in_col = std::find(selected_cols.begin(), selected_cols.end(), col) !=
                      selected_cols.end();
  if (in_row && in_col) return CellGroup::kSelected;
  if (in_row) return CellGroup::kSameRow;
  if (in_col) return CellGroup::kSameCol;
  return CellGroup::kDiagonal;
}

const char* to_string(DisturbFlag f) {
  switch (f) {
    case DisturbFlag::kPass: return "pass";
    case DisturbFlag::kPartialRisk: return "partial-risk";
    case DisturbFlag::kDisturb: return "disturb";
  }
  return "?";
}

const DisturbEntry& DisturbReport::at(Operation op, CellGroup g) const {
  for (const auto& e : entries)
    if (e.op == op && e.group == g) return e;
  throw std::out_of_range("DisturbReport: no such entry");
}

bool DisturbReport::any_disturb() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const DisturbEntry& e) { return e.flag == DisturbFlag::kDisturb; });
}

bool DisturbReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const DisturbEntry& e) { return e.flag == DisturbFlag::kPass; });
}

std::string DisturbReport::table() const {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "scheme: %s\n%-8s %-9s %10s %10s  %s\n",
                to_string(scheme), "op", "group", "V_gb[V]", "margin[V]", "flag");
  out += buf;
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%-8s %-9s %10.4f %10.4f  %s\n", to_string(e.op),
                  to_string(e.group), e.v_gb, e.margin, to_string(e.flag));
    out += buf;
  }
  return out;
}

DisturbReport verify_scheme(double vw0, double vw1, WriteScheme scheme,
                            const DisturbThresholds& thresholds,
                            double partial_margin) {
  if (!(vw0 < 0.0 && vw1 > 0.0))
    throw std::invalid_argument("verify_scheme: require V_W0 < 0 < V_W1");
  // A 2x2 array holds one cell of each group relative to (0, 0).
  const ArrayConfig config = ArrayConfig::make(Topology::kCand, 2, 2);
  BiasVoltages v;
  v.vw0 = vw0;
  v.vw1 = vw1;
  const int sel_cols[] = {0};

  DisturbReport report;
  report.scheme = scheme;
  for (Operation op : {Operation::kWrite0, Operation::kWrite1}) {
    const BiasPlan plan = cand_write_bias(op, 0, sel_cols, config, v, scheme);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        DisturbEntry e;
        e.op = op;
        e.group = classify(r, c, 0, sel_cols);
        e.v_gb = cell_write_voltage(plan, r, c);
        const double thr = e.v_gb < 0.0 ? thresholds.write0 : thresholds.write1;
        const double mag = std::abs(e.v_gb);
        e.margin = thr - mag;
        if (e.group != CellGroup::kSelected) {
          if (mag >= thr)
            e.flag = DisturbFlag::kDisturb;
          else if (mag > partial_margin * thr)
            e.flag = DisturbFlag::kPartialRisk;
        }
        report.entries.push_back(e);
      }
    }
  }
  return report;
}

}  // namespace fecand
