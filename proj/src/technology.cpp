#include "fecand/technology.hpp"

#include <cmath>
#include <stdexcept>

namespace fecand {

void Technology::validate() const {
  ferro.validate();
  fet.validate();
  if (!(bias.vw0 < 0.0) || !(bias.vw1 > 0.0))
    throw std::invalid_argument("technology: require V_W0 < 0 < V_W1");
  if (!(bias.t_pulse > 0.0))
    throw std::invalid_argument("technology: pulse duration must be positive");
  if (!(settle >= 0.0)) throw std::invalid_argument("technology: settle must be >= 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("technology: lambda must be positive");
  if (!(bulk_spacing >= 0.0))
    throw std::invalid_argument("technology: bulk spacing must be >= 0");
  const auto& p = parasitics;
  if (p.rm < 0 || p.cm < 0 || p.rp < 0 || p.cp < 0)
    throw std::invalid_argument("technology: parasitics must be >= 0");
  const double area = fet.w * fet.l;
  if (std::abs(area - ferro.area) > 1e-9 * area)
    throw std::invalid_argument("technology: ferroelectric area must equal W*L");
}

FeFetState Technology::written_cell(bool bit) const {
  const FeFetState start = bit ? erased_cell() : programmed_cell();
  return write_and_settle(start, bit ? bias.vw1 : bias.vw0, bias.t_pulse, settle,
                          ferro, fet);
}

double Technology::reference_current() const {
  const double i0 = drain_current(bias.vwl, bias.vsl, written_cell(false).vt, fet);
  const double i1 = drain_current(bias.vwl, bias.vsl, written_cell(true).vt, fet);
  return std::sqrt(i0 * i1);
}

ArrayConfig Technology::array(Topology topology, int rows, int cols) const {
  ArrayConfig c = ArrayConfig::make(topology, rows, cols);
  c.lambda = lambda;
  c.parasitics = parasitics;
  c.pitch = layout_pitch(topology, bulk_spacing);
  c.validate();
  return c;
}

}  // namespace fecand
