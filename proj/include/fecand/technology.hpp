#pragma once

#include "fecand/fefet.hpp"
#include "fecand/schemes.hpp"

namespace fecand {

// Everything a simulation needs to know about the device and its operating
// point. Defaults are the calibrated 28 nm FeFET values.
struct Technology {
  FerroParams ferro;
  FeFetParams fet;
  BiasVoltages bias;
  // Time at 0 V after each write pulse, letting E_eff relax before a read.
  double settle = 50e-6;
  // Array context: wire parasitics, feature size and bulk-well spacing.
  Parasitics parasitics;
  double lambda = 28e-9;
  double bulk_spacing = kDefaultBulkSpacing;

  void validate() const;

  FeFetState erased_cell() const { return FeFetState::erased(ferro, fet); }
  FeFetState programmed_cell() const { return FeFetState::programmed(ferro, fet); }

  // Cell states produced by a full write from the opposite remanent state.
  FeFetState written_cell(bool bit) const;

  // Sense-amplifier reference: geometric mean of the nominal single-cell
  // read currents of freshly written '0' and '1' cells.
  double reference_current() const;

  // Array of the given topology built with this technology's wire context.
  ArrayConfig array(Topology topology, int rows, int cols) const;
};

}  // namespace fecand
