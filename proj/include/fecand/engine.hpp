// Executes bias plans on an array: gate-field transients for writes and a
// DC nonlinear nodal solve for reads.
#pragma once

#include <vector>

#include "fecand/schemes.hpp"
#include "fecand/technology.hpp"

namespace fecand {

struct ArrayState {
  ArrayConfig config;
  Technology tech;
  std::vector<FeFetState> cells;  // row-major, rows x cols

  static ArrayState uniform(const ArrayConfig& config, const Technology& tech,
                            const FeFetState& cell);
  FeFetState& cell(int r, int c) {
    return cells[static_cast<size_t>(r) * static_cast<size_t>(config.cols) +
                 static_cast<size_t>(c)];
  }
  const FeFetState& cell(int r, int c) const {
    return cells[static_cast<size_t>(r) * static_cast<size_t>(config.cols) +
                 static_cast<size_t>(c)];
  }
  // Logic value read from the threshold: '1' when vt < V_WL.
  bool bit(int r, int c) const { return cell(r, c).vt < tech.bias.vwl; }
};

// Pulse every cell with its plan V_gb for plan.duration, then hold all lines
// at 0 V for tech.settle. Idle plans only relax. Throws std::invalid_argument
// on a topology mismatch or a plan that would put V_DS != 0 on any device.
ArrayState apply_write(const ArrayState& state, const BiasPlan& plan);

struct SolverOptions {
  double g_float = 1e-15;     // [S] high-Z line to ground
  double tolerance = 1e-13;   // [A] max node current residual
  int max_iterations = 200;
  double max_step = 0.25;     // [V] per Newton update
};

struct ReadResult {
  std::vector<int> bl_index;       // selected columns
  std::vector<double> bl_current;  // sensed current per selected column [A]
  std::vector<double> cell_current;  // rows x cols, drain -> source [A]
  double supply_current = 0.0;     // delivered by the read drain driver(s) [A]
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
  int rows = 0;
  int cols = 0;

  double cell(int r, int c) const {
    return cell_current[static_cast<size_t>(r) * static_cast<size_t>(cols) +
                        static_cast<size_t>(c)];
  }
  double current_at(int col) const;
};

// Accepts read plans and idle plans (nothing selected, no sensed BL).
// Throws SolverError with the residual history on non-convergence.
ReadResult solve_read(const ArrayState& state, const BiasPlan& plan,
                      const SolverOptions& options = {});

// Convenience wrappers around the read plans.
ReadResult read_cell(const ArrayState& state, int row, int col,
                     const SolverOptions& options = {});
ReadResult read_word(const ArrayState& state, int row,
                     const SolverOptions& options = {});

struct ColumnReadout {
  double i_selected = 0.0;  // channel current of the selected cell [A]
  double i_leak = 0.0;      // sneak current reaching the sensed BL [A]
  double v_bl_unsel = 0.0;  // C-AND: merged unselected BL potential [V]
  double v_sl_unsel = 0.0;  // C-AND: merged unselected SL potential [V]

  double total() const { return i_selected + i_leak; }
  double effective_resistance(double v) const { return v / i_leak; }
};

// Single-column readout with the leakage of the rest of the array, without
// wire resistance. AND: sum of unselected off-currents on the column. C-AND:
// all unselected BLs and all unselected SLs are merged into two nodes and the
// three-device sneak network (row, diagonal, column devices) is solved with
// the real device curves.
ColumnReadout column_readout_with_leak(const ArrayState& state, int column,
                                       int selected_row,
                                       const SolverOptions& options = {});

// Same network for an n x n-or-larger array in which the selected cell holds
// `selected` and every other cell holds `others`.
ColumnReadout column_readout_uniform(const Technology& tech, Topology topology,
                                     int rows, int cols,
                                     const FeFetState& selected,
                                     const FeFetState& others,
                                     const SolverOptions& options = {});

// Repeated disturb pulses of `v_disturb` on one cell, each followed by a
// relaxation of the same width. Returns vt before and after every pulse.
std::vector<double> accumulate_disturb(const ArrayState& state, int row, int col,
                                       double v_disturb, int pulse_count,
                                       double pulse_width);

}  // namespace fecand
