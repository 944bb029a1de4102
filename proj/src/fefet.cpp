#include "fecand/fefet.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include "fecand/error.hpp"

namespace fecand {

namespace {

constexpr double kEps0 = 8.8541878128e-12;

double softplus(double x) {
  if (x > 35.0) return x;
  if (x < -35.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Voltage dropped across the MOS part of the stack in depletion mode. Zero at
// V_gb = 0, ~0 in accumulation, pinned near v_depletion once inverted.
double depletion_drop(double v_gb, const FeFetParams& p) {
  if (v_gb == 0.0) return 0.0;
  const double w = p.depletion_width;
  const double vd = p.v_depletion;
  const double offset = w * (softplus(0.0) - softplus(-vd / w));
  return w * softplus(v_gb / w) - w * softplus((v_gb - vd) / w) - offset;
}

}  // namespace

const char* to_string(GateMode mode) {
  switch (mode) {
    case GateMode::kDirect: return "direct";
    case GateMode::kDivider: return "divider";
    case GateMode::kDepletion: return "depletion";
  }
  return "?";
}

GateMode gate_mode_from_string(const char* name) {
  if (std::strcmp(name, "direct") == 0) return GateMode::kDirect;
  if (std::strcmp(name, "divider") == 0) return GateMode::kDivider;
  if (std::strcmp(name, "depletion") == 0) return GateMode::kDepletion;
  throw std::invalid_argument(std::string("unknown gate mode: ") + name);
}

double FeFetParams::thermal_scale() const {
  // In deep subthreshold I ~ exp(2 (Vgs - vt) / scale); choosing
  // scale = S * n_slope / ln 10 with n_slope = 2 gives exactly S per decade.
  return s * n_slope / std::numbers::ln10;
}

void FeFetParams::validate() const {
  if (!(mw > 0.0)) throw std::invalid_argument("fefet: MW must be positive");
  if (!(s > 0.0)) throw std::invalid_argument("fefet: S must be positive");
  if (!(i_spec > 0.0)) throw std::invalid_argument("fefet: I_spec must be positive");
  if (!(n_slope > 0.0)) throw std::invalid_argument("fefet: n_slope must be positive");
  if (!(g_min >= 0.0)) throw std::invalid_argument("fefet: G_min must be >= 0");
  if (!(w > 0.0) || !(l > 0.0))
    throw std::invalid_argument("fefet: W and L must be positive");
  if (gate_mode == GateMode::kDivider && !(c_il > 0.0))
    throw std::invalid_argument("fefet: C_il must be positive in divider mode");
  if (gate_mode == GateMode::kDepletion &&
      (!(v_depletion >= 0.0) || !(depletion_width > 0.0)))
    throw std::invalid_argument("fefet: invalid depletion parameters");
}

FeFetState FeFetState::from_branch(const BranchState& b, const FerroParams& fp,
                                   const FeFetParams& params) {
  return FeFetState{b, vt_of_polarization(b.p, fp.ps, params)};
}

FeFetState FeFetState::erased(const FerroParams& fp, const FeFetParams& params) {
  return from_branch(BranchState::negative_remanent(fp), fp, params);
}

FeFetState FeFetState::programmed(const FerroParams& fp,
                                  const FeFetParams& params) {
  return from_branch(BranchState::positive_remanent(fp), fp, params);
}

double vt_of_polarization(double p, double ps, const FeFetParams& params) {
  return params.vt_mid - (p / ps) * (0.5 * params.mw);
}

double drain_current(double vgs, double vds, double vt, const FeFetParams& params) {
  const double scale = params.thermal_scale();
  const double k = params.i_spec * (params.w / params.l);
  const double fs = softplus((vgs - vt) / scale);
  const double fd = softplus((vgs - vt - vds) / scale);
  return k * (fs * fs - fd * fd) + params.g_min * vds;
}

ChannelEval channel_current(double va, double vb, double vg, double vbulk,
                            double vt, const FeFetParams& params) {
  const double scale = params.thermal_scale();
  const double k = params.i_spec * (params.w / params.l);
  const double ra = std::max(va, vbulk);
  const double rb = std::max(vb, vbulk);
  const double xa = (vg - vt - ra) / scale;
  const double xb = (vg - vt - rb) / scale;
  const double fa = softplus(xa);
  const double fb = softplus(xb);
  ChannelEval out;
  out.current = k * (fb * fb - fa * fa) + params.g_min * (va - vb);
  out.d_va = (va > vbulk ? 2.0 * k * fa * sigmoid(xa) / scale : 0.0) + params.g_min;
  out.d_vb = (vb > vbulk ? -2.0 * k * fb * sigmoid(xb) / scale : 0.0) - params.g_min;
  return out;
}

double gate_drive(double v_gb, const FeFetState& state, const FerroParams& fp,
                  const FeFetParams& params) {
  switch (params.gate_mode) {
    case GateMode::kDirect:
      return v_gb;
    case GateMode::kDepletion:
      return v_gb - depletion_drop(v_gb, params);
    case GateMode::kDivider:
      break;
  }

  // Charge balance per unit area:
  //   P(V/T) + eps V/T = C_il (V_gb - V)
  const double c_fe = params.eps_fe * kEps0 / fp.t_fe;
  auto residual = [&](double v) {
    return branch_polarization(state.ferro, v / fp.t_fe, fp) + c_fe * v -
           params.c_il * (v_gb - v);
  };
  auto slope = [&](double v) {
    return branch_slope(state.ferro, v / fp.t_fe, fp) / fp.t_fe + c_fe +
           params.c_il;
  };

  double v = v_gb * params.c_il / (params.c_il + c_fe);
  double r = residual(v);
  std::vector<double> history;
  history.reserve(64);
  for (int it = 0; it < 200; ++it) {
    history.push_back(std::abs(r) * fp.area);
    if (std::abs(r) * fp.area < 1e-15) return v;
    const double step = -r / slope(v);
    double lambda = 1.0;
    double v_next = v + step;
    double r_next = residual(v_next);
    while (std::abs(r_next) > std::abs(r) && lambda > 1e-6) {
      lambda *= 0.5;
      v_next = v + lambda * step;
      r_next = residual(v_next);
    }
    v = v_next;
    r = r_next;
  }
  throw SolverError("gate_drive: divider charge balance did not converge "
                    "(residual " + std::to_string(history.back()) + " C)",
                    std::move(history));
}

FeFetState write_cell(const FeFetState& state, double v_gb, double duration,
                      const FerroParams& fp, const FeFetParams& params,
                      int nsteps) {
  BranchState b = state.ferro;
  if (params.gate_mode == GateMode::kDivider) {
    // The divider split depends on the polarization, so re-solve it per step.
    const double dt = duration / nsteps;
    for (int i = 0; i < nsteps; ++i) {
      const double v_fe = gate_drive(v_gb, FeFetState{b, 0.0}, fp, params);
      b = apply_pulse(b, v_fe, dt, 1, fp);
    }
  } else {
    b = apply_pulse(b, gate_drive(v_gb, state, fp, params), duration, nsteps, fp);
  }
  return FeFetState::from_branch(b, fp, params);
}

FeFetState write_and_settle(const FeFetState& state, double v_gb,
                            double duration, double settle,
                            const FerroParams& fp, const FeFetParams& params) {
  FeFetState s = write_cell(state, v_gb, duration, fp, params);
  if (settle > 0.0) s = write_cell(s, 0.0, settle, fp, params);
  return s;
}

}  // namespace fecand
