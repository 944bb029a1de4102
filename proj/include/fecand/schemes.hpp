// Array topologies and their bias plans.
//
// C-AND: WL and SL run along rows (gates, drains); BL and BuL run along
// columns (sources, per-column wells). AND: WL along rows, BL and SL along
// columns (drains, sources), one common bulk at 0 V.
#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace fecand {

enum class Topology { kAnd, kCand };

const char* to_string(Topology t);
Topology topology_from_string(const std::string& name);

// Table-default line parasitics; resistances per micron, capacitances in fF
// per micron.
struct Parasitics {
  double rm = 9.45;   // metal [ohm/um]
  double cm = 0.22;   // metal [fF/um]
  double rp = 2000.0; // poly [ohm/um]
  double cp = 0.15;   // poly [fF/um]
};

struct CellPitch {
  double x = 0.0;  // along a row, i.e. column-to-column [lambda]
  double y = 0.0;  // row-to-row [lambda]
};

// Laid-out cell pitch of each topology. Bulk spacing widens the column pitch.
CellPitch layout_pitch(Topology t, double bulk_spacing_lambda);
inline constexpr double kDefaultBulkSpacing = 35.7;  // lambda

struct ArrayConfig {
  int rows = 1;
  int cols = 1;
  Topology topology = Topology::kCand;
  double lambda = 28e-9;  // [m]
  CellPitch pitch = layout_pitch(Topology::kCand, kDefaultBulkSpacing);
  Parasitics parasitics;

  static ArrayConfig make(Topology t, int rows, int cols);
  void validate() const;

  // Wire segment lengths between adjacent cells [um].
  double segment_x_um() const { return pitch.x * lambda * 1e6; }
  double segment_y_um() const { return pitch.y * lambda * 1e6; }
};

struct BiasVoltages {
  double vw0 = -1.5;     // write '0' [V]
  double vw1 = 3.2;      // write '1' [V]
  double vwl = 1.0;      // read wordline [V]
  double vsl = 1.0;      // read drain [V]
  double t_pulse = 10e-6;  // [s]
};

enum class LineKind { kWordLine, kSelectLine, kBitLine, kBulkLine };
const char* line_name(LineKind k);

struct Drive {
  bool high_z = false;
  double volts = 0.0;

  static Drive hz() { return {true, 0.0}; }
  static Drive at(double v) { return {false, v}; }
  bool operator==(const Drive&) const = default;
};

enum class Operation { kWrite0, kWrite1, kRead, kIdle };
const char* to_string(Operation op);

enum class WriteScheme { kVdd3, kVdd2, kMixed };
const char* to_string(WriteScheme s);
WriteScheme write_scheme_from_string(const std::string& name);

struct BiasPlan {
  Topology topology = Topology::kCand;
  int rows = 0;
  int cols = 0;
  Operation op = Operation::kIdle;
  double duration = 0.0;
  int selected_row = -1;
  std::vector<int> selected_cols;
  // Indexed by LineKind. AND plans carry SL per column and no BuL entries;
  // C-AND plans carry SL per row.
  std::array<std::vector<Drive>, 4> lines;

  std::vector<Drive>& of(LineKind k) { return lines[static_cast<size_t>(k)]; }
  const std::vector<Drive>& of(LineKind k) const {
    return lines[static_cast<size_t>(k)];
  }
  // Expected number of lines of each kind for this topology.
  static int line_count(Topology t, LineKind k, int rows, int cols);
  bool is_write() const {
    return op == Operation::kWrite0 || op == Operation::kWrite1;
  }
  // Throws std::invalid_argument if a line is missing or a selected line is
  // left floating.
  void validate() const;
};

BiasPlan cand_write_bias(Operation op, int row, std::span<const int> cols,
                         const ArrayConfig& config, const BiasVoltages& v,
                         WriteScheme scheme = WriteScheme::kMixed);
BiasPlan cand_read_bias(int row, std::span<const int> cols,
                        const ArrayConfig& config, const BiasVoltages& v);
// V_DD/3 write for the AND array with signed write voltage vw.
BiasPlan and_write_bias(Operation op, int row, int col, double vw,
                        const ArrayConfig& config, double duration);
BiasPlan and_read_bias(int row, int col, const ArrayConfig& config,
                       const BiasVoltages& v);
// Every line grounded: the placeholder phase of a two-cycle word write whose
// cycle has no bits to write.
BiasPlan idle_plan(const ArrayConfig& config, double duration);

// Effective gate-bulk voltage seen by cell (row, col) during a write plan.
double cell_write_voltage(const BiasPlan& plan, int row, int col);

enum class CellGroup { kSelected, kSameRow, kSameCol, kDiagonal };
const char* to_string(CellGroup g);
CellGroup classify(int row, int col, int selected_row,
                   std::span<const int> selected_cols);

enum class DisturbFlag { kPass, kPartialRisk, kDisturb };
const char* to_string(DisturbFlag f);

struct DisturbThresholds {
  double write0 = 1.5;  // |V| that writes '0' (negative polarity)
  double write1 = 3.2;  // |V| that writes '1' (positive polarity)
};

struct DisturbEntry {
  Operation op = Operation::kWrite0;
  CellGroup group = CellGroup::kSelected;
  double v_gb = 0.0;
  DisturbFlag flag = DisturbFlag::kPass;
  double margin = 0.0;  // threshold - |V_gb| for the polarity seen [V]
};

struct DisturbReport {
  WriteScheme scheme = WriteScheme::kMixed;
  std::vector<DisturbEntry> entries;

  const DisturbEntry& at(Operation op, CellGroup g) const;
  bool any_disturb() const;
  bool all_pass() const;
  std::string table() const;
};

// Audits a scheme: negative V_gb is compared against the '0' threshold and
// positive V_gb against the '1' threshold. `partial_margin` is the fraction
// of a threshold strictly above which a group is flagged as a partial-switch
// risk.
DisturbReport verify_scheme(double vw0, double vw1, WriteScheme scheme,
                            const DisturbThresholds& thresholds,
                            double partial_margin = 0.5);
inline DisturbReport verify_scheme(double vw0, double vw1, WriteScheme scheme) {
  return verify_scheme(vw0, vw1, scheme, DisturbThresholds{-vw0, vw1});
}

}  // namespace fecand
