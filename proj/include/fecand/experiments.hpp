// End-to-end campaigns on top of the engine. Every function is a pure
// function of its inputs; parallel work is merged by index.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fecand/analytics.hpp"
#include "fecand/engine.hpp"
#include "fecand/report.hpp"

namespace fecand {

// Canonical key=value text of every technology parameter (digest input).
std::string describe(const Technology& tech);

// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware).
// The first exception thrown by any worker is rethrown.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

ExperimentReport device_sweep(const Technology& tech, double vgs_min = -0.5,
                              double vgs_max = 2.5, int points = 121);

ExperimentReport hysteresis_loop(const Technology& tech, double amplitude,
                                 int nsteps = 400);

ExperimentReport scheme_audit(double vw0, double vw1, WriteScheme scheme,
                              double partial_margin = 0.5);

struct LongBitlineOptions {
  std::vector<int> sizes;  // empty: 2, 4, ..., 2048
  int threads = 0;
};
ExperimentReport long_bitline_sweep(const Technology& tech,
                                    const LongBitlineOptions& options = {});

ExperimentReport disturb_matrix(const Technology& tech, int rows = 16, int cols = 16);

struct WordWrite {
  ArrayState state;
  int phases = 0;
  std::vector<bool> readback;
  std::vector<double> currents;
};
// Two-phase write of `bits` (bit j -> column j) into `row`, then a
// single-cycle whole-word read compared against the reference current.
WordWrite write_word(const ArrayState& state, int row, const std::vector<bool>& bits,
                     bool ones_first = false);

struct WordWriteOptions {
  int rows = 8;
  int cols = 8;
  int row = 0;
  std::vector<std::uint32_t> words;  // empty: all 2^cols words in order
  bool ones_first = false;
};
ExperimentReport word_write_demo(const Technology& tech,
                                 const WordWriteOptions& options = {});

struct McConfig {
  int samples = 1000;
  double sigma_vw0 = 0.075;  // [V]
  double sigma_vw1 = 0.160;  // [V]
  double sigma_wl = 50e-9;   // [m]
  bool shared_wl = true;     // one draw for both W and L
  std::uint64_t seed = 1;
  int leak_rows = 512;
  int leak_cols = 512;
  int threads = 0;
  int histogram_bins = 40;

  void validate() const;
};

struct McSample {
  double vw0 = 0.0, vw1 = 0.0, w = 0.0, l = 0.0;
  double vt0 = 0.0, vt1 = 0.0;
  double i0 = 0.0, i1 = 0.0;  // readouts including the array leakage
};
McSample monte_carlo_trial(const Technology& tech, const McConfig& config, int trial,
                           double leak0, double leak1);
ExperimentReport monte_carlo(const Technology& tech, const McConfig& config);

struct PowerSweepOptions {
  std::vector<int> sizes;  // empty: 2, 4, 8, 16, 32
  int threads = 0;
};
ExperimentReport power_sweep(const Technology& tech,
                             const PowerSweepOptions& options = {});

// Gate capacitance of one cell used for wordline charging [F].
double cell_gate_capacitance(const Technology& tech);

struct AccumulativeOptions {
  int max_pulses = 10000;
  double pulse_width = 10e-6;
  int threads = 0;
};
ExperimentReport accumulative_disturb_sweep(const Technology& tech,
                                            const AccumulativeOptions& options = {});

ExperimentReport area_report(double spacing = kDefaultBulkSpacing);

}  // namespace fecand
