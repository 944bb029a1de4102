// FeFET = Preisach ferroelectric layer in series with the gate of an n-FET.
//
// The transistor is a smooth surrogate (EKV-style softplus interpolation)
// calibrated to the operating currents of a 500 nm x 500 nm device: roughly
// 0.5 uA for a programmed cell at V_GS = V_DS = 1 V and well under 100 pA
// for an erased one.
#pragma once

#include "fecand/ferro.hpp"

namespace fecand {

enum class GateMode {
  kDirect,     // V_fe = V_gb
  kDivider,    // linear interlayer capacitor in series with the ferroelectric
  kDepletion,  // underlying MOS stack absorbs up to v_depletion for V_gb > 0
};

const char* to_string(GateMode mode);
GateMode gate_mode_from_string(const char* name);

struct FeFetParams {
  double w = 500e-9;
  double l = 500e-9;
  double vt_mid = 1.0;   // [V]
  double mw = 1.2;       // Vt0 - Vt1 [V]
  double s = 0.130;      // subthreshold swing [V/decade]
  double i_spec = 2.212e-8;  // [A] at W = L
  double n_slope = 2.0;
  double g_min = 1e-16;  // [S]
  GateMode gate_mode = GateMode::kDepletion;
  double c_il = 3.9 * 8.8541878128e-12 / 1e-9;  // [F/m^2], divider mode
  double eps_fe = 30.0;                          // relative permittivity
  double v_depletion = 1.2;                      // [V], depletion mode
  double depletion_width = 0.05;                 // [V], corner smoothing

  double vt1() const { return vt_mid - 0.5 * mw; }  // programmed, logic '1'
  double vt0() const { return vt_mid + 0.5 * mw; }  // erased, logic '0'
  double thermal_scale() const;                      // softplus voltage scale
  void validate() const;
};

struct FeFetState {
  BranchState ferro;
  double vt = 0.0;

  static FeFetState from_branch(const BranchState& b, const FerroParams& fp,
                                const FeFetParams& params);
  // Major-loop remanent states.
  static FeFetState erased(const FerroParams& fp, const FeFetParams& params);
  static FeFetState programmed(const FerroParams& fp, const FeFetParams& params);
};

double vt_of_polarization(double p, double ps, const FeFetParams& params);

// Channel current from drain to source. Symmetric in the sense that
// I(Vgs, -Vds) evaluated from the other terminal is -I.
double drain_current(double vgs, double vds, double vt, const FeFetParams& params);

// Terminal-level form used by the nodal solver: current flowing from
// terminal a into terminal b with gate and bulk at absolute potentials. The
// source reference of each terminal is max(V_terminal, V_bulk).
struct ChannelEval {
  double current = 0.0;
  double d_va = 0.0;
  double d_vb = 0.0;
};
ChannelEval channel_current(double va, double vb, double vg, double vbulk,
                            double vt, const FeFetParams& params);

// Voltage across the ferroelectric for a gate-bulk voltage `v_gb`.
// Throws SolverError (divider mode) if the charge balance fails to converge.
double gate_drive(double v_gb, const FeFetState& state, const FerroParams& fp,
                  const FeFetParams& params);

// Applies V_gb for `duration`; the returned state is the one at the end of
// the pulse, still under bias.
FeFetState write_cell(const FeFetState& state, double v_gb, double duration,
                      const FerroParams& fp, const FeFetParams& params,
                      int nsteps = 16);

// Pulse followed by `settle` seconds at 0 V, i.e. what a cell holds once the
// array lines return to ground.
FeFetState write_and_settle(const FeFetState& state, double v_gb,
                            double duration, double settle,
                            const FerroParams& fp, const FeFetParams& params);

}  // namespace fecand
