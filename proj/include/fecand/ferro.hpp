// Time-dependent Preisach model of the ferroelectric gate layer.
//
// Polarization follows a tanh branch whose scale k and offset P_off are
// rebuilt at every turning point of the effective field, which lets the
// model form unsaturated subloops. The effective field lags the applied
// field with a single relaxation constant tau_eff.
#pragma once

#include <vector>

namespace fecand {

struct FerroParams {
  double ps = 0.2;        // saturation polarization [C/m^2]
  double pr = 0.19;       // remanent polarization [C/m^2]
  double ec = 1.04e8;     // coercive field [V/m]
  double t_fe = 10e-9;    // ferroelectric thickness [m]
  double tau_eff = 1e-6;  // effective-field delay [s]
  double area = 500e-9 * 500e-9;  // W*L [m^2]

  double coercive_voltage() const { return ec * t_fe; }

  // Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

enum class Direction { kAscending, kDescending };

struct BranchState {
  Direction direction = Direction::kAscending;
  double k = 1.0;
  double p_off = 0.0;
  double e_eff = 0.0;  // [V/m]
  double p = 0.0;      // [C/m^2]

  bool on_major_loop() const { return k == 1.0 && p_off == 0.0; }

  // Remanent states on the major loop: ascending branch at E = 0 holds -Pr,
  // descending branch at E = 0 holds +Pr.
  static BranchState negative_remanent(const FerroParams& params);
  static BranchState positive_remanent(const FerroParams& params);
};

// Shape field of the Gaussian dipole density; rejects Pr outside (0, Ps).
double delta_of(const FerroParams& params);

// P on the branch described by `state` evaluated at field `e` (V/m).
double branch_polarization(const BranchState& state, double e,
                           const FerroParams& params);

// dP/dE of the branch at `e`.
double branch_slope(const BranchState& state, double e,
                    const FerroParams& params);

// Exact solution of dE/dt = (E_ext - E)/tau over `dt` with constant E_ext.
double advance_field(double e_eff, double e_ext, double dt, double tau_eff);

// Flips the branch direction at the current turning point (e_eff, p). The new
// branch passes through the turning point and saturates at +Ps (ascending)
// or -Ps (descending).
BranchState reverse_branch(const BranchState& state, const FerroParams& params);

// Integrates a constant voltage `v_fe` across the layer for `duration`
// seconds, split into `nsteps` sub-steps.
BranchState apply_pulse(const BranchState& state, double v_fe, double duration,
                        int nsteps, const FerroParams& params);

struct LoopPoint {
  double v;  // [V]
  double p;  // [C/m^2]
};

// Quasi-static triangular sweep 0 -> +A -> -A -> 0 starting from the
// negative remanent state. Each point holds the field for 50 tau_eff.
std::vector<LoopPoint> trace_loop(const FerroParams& params, double v_amplitude,
                                  int nsteps);

}  // namespace fecand
