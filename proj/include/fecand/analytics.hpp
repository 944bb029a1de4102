// Closed-form leakage, power and area models plus a brute-force network
// oracle for the leakage formula.
#pragma once

#include "fecand/schemes.hpp"

namespace fecand {

struct LeakModel {
  double r_on = 0.0;    // R_O, conducting unselected device [ohm]
  double r_off = 0.0;   // R_C, non-conducting device [ohm]
  double r_sel = 0.0;   // R_S, selected cell in its high-resistance state [ohm]
  int m = 2;            // rows
  int n = 2;            // cols

  void validate() const;
};

// R_O/(n-1) + R_C/((m-1)(n-1)) + R_C/(m-1)
double r_eff(const LeakModel& model);
// R_C/(m-1); r_eff always exceeds it.
double r_eff_lower_bound(const LeakModel& model);

// Exact sneak resistance of the linear read network: selected row of R_O
// devices feeding the unselected BLs, an (m-1)x(n-1) grid of R_C devices to
// the unselected SLs, and the m-1 R_C devices of the selected column into
// the sensed BL. The selected cell itself is excluded. Returns +inf when no
// sneak path exists (R_C infinite).
double brute_force_network(const LeakModel& model);

struct PowerModel {
  int n0 = 0;
  int n1 = 0;
  double i_low = 0.0;   // [A]
  double i_high = 0.0;  // [A]
  double v_sl = 1.0;    // [V]
  double p_wl = 0.0;    // [W]
  double p_leak = 0.0;  // [W]

  void validate() const;
};

struct PowerBreakdown {
  double i_sl = 0.0;         // n0 I_low + n1 I_high
  double p_sl = 0.0;         // I_SL V_SL
  double p_sl_max = 0.0;     // all bits '1'
  double p_total = 0.0;      // P_SL + P_WL + P_leak for the word
  double p_bit = 0.0;        // single '1' bit: I_high V_SL + P_WL + P_leak
  double p_word = 0.0;       // n-bit word: n (I_high V_SL) + P_WL + P_leak
};

PowerBreakdown read_current_and_power(const PowerModel& model);

// WL charging power for one read per t_read: C_WL V^2 / t_read, where C_WL
// is the poly line capacitance over `cols` cells plus the gate capacitance
// of each cell.
double wordline_power(const ArrayConfig& config, double gate_capacitance,
                      double v_wl, double t_read);

struct AreaModel {
  double spacing = kDefaultBulkSpacing;  // well spacing [lambda]
  bool with_spacing = false;
};

// Cell area in lambda^2.
double cell_area(const AreaModel& model, Topology topology);

}  // namespace fecand
