#include "fecand/analytics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fecand {

void LeakModel::validate() const {
  if (m < 2 || n < 2) throw std::invalid_argument("leak model: need m >= 2 and n >= 2");
  if (!(r_on > 0.0) || !(r_off > r_on))
    throw std::invalid_argument("leak model: require R_C > R_O > 0");
  if (r_sel < 0.0) throw std::invalid_argument("leak model: R_S must be >= 0");
}

double r_eff(const LeakModel& model) {
  model.validate();
  const double m1 = model.m - 1;
  const double n1 = model.n - 1;
  return model.r_on / n1 + model.r_off / (m1 * n1) + model.r_off / m1;
}

double r_eff_lower_bound(const LeakModel& model) {
  model.validate();
  return model.r_off / (model.m - 1);
}

double brute_force_network(const LeakModel& model) {
  model.validate();
  if (std::isinf(model.r_off)) return std::numeric_limits<double>::infinity();

  // Unknowns: unselected BLs 0..n-2, then unselected SLs n-1..n+m-3.
  // Selected SL at 1 V, selected BL at 0 V.
  const int nb = model.n - 1;
  const int ns = model.m - 1;
  const int size = nb + ns;
  const double g_on = 1.0 / model.r_on;
  const double g_off = 1.0 / model.r_off;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(size, size);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);

  for (int j = 0; j < nb; ++j) {
    g(j, j) += g_on;  // selected-row device from the driven SL
    rhs[j] += g_on * 1.0;
  }
  for (int i = 0; i < ns; ++i) {
    const int s = nb + i;
    for (int j = 0; j < nb; ++j) {
      g(s, s) += g_off;
      g(j, j) += g_off;
      g(s, j) -= g_off;
      g(j, s) -= g_off;
    }
    g(s, s) += g_off;  // selected-column device into the sensed BL
  }
  const Eigen::VectorXd v = g.ldlt().solve(rhs);
  double current = 0.0;
  for (int i = 0; i < ns; ++i) current += g_off * v[nb + i];
  return 1.0 / current;
}

void PowerModel::validate() const {
  if (n0 < 0 || n1 < 0) throw std::invalid_argument("power model: negative bit count");
  if (i_low < 0 || i_high < 0 || v_sl < 0 || p_wl < 0 || p_leak < 0)
    throw std::invalid_argument("power model: currents, voltage and powers must be >= 0");
}

PowerBreakdown read_current_and_power(const PowerModel& model) {
  model.validate();
  PowerBreakdown out;
  const int bits = model.n0 + model.n1;
  out.i_sl = model.n0 * model.i_low + model.n1 * model.i_high;
  out.p_sl = out.i_sl * model.v_sl;
  out.p_sl_max = bits * model.i_high * model.v_sl;
  out.p_total = out.p_sl + model.p_wl + model.p_leak;
  out.p_bit = model.i_high * model.v_sl + model.p_wl + model.p_leak;
  out.p_word = bits * model.i_high * model.v_sl + model.p_wl + model.p_leak;
  return out;
}

double wordline_power(const ArrayConfig& config, double gate_capacitance, double v_wl,
                      double t_read) {
  if (!(t_read > 0.0)) throw std::invalid_argument("wordline_power: t_read must be > 0");
  const double length_um = config.cols * config.segment_x_um();
  const double c_line = config.parasitics.cp * 1e-15 * length_um;
  const double c_wl = c_line + config.cols * gate_capacitance;
  return c_wl * v_wl * v_wl / t_read;
}

double cell_area(const AreaModel& model, Topology topology) {
  if (model.spacing < 0.0) throw std::invalid_argument("area: spacing must be >= 0");
  const CellPitch p = layout_pitch(topology, model.with_spacing ? model.spacing : 0.0);
  return p.x * p.y;
}

}  // namespace fecand
