#include "fecand/ferro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fecand {

namespace {

// Smallest branch scale kept after a reversal. A turning point sitting on
// +/-Ps would otherwise produce k = 0 and a degenerate flat branch.
constexpr double kMinScale = 1e-12;

double shifted_field(Direction dir, double e, double ec) {
  return dir == Direction::kAscending ? e - ec : e + ec;
}

}  // namespace

void FerroParams::validate() const {
  if (!(pr > 0.0) || !(pr < ps))
    throw std::invalid_argument("ferro: require 0 < Pr < Ps (Pr=" +
                                std::to_string(pr) +
                                ", Ps=" + std::to_string(ps) + ")");
  if (!(ec > 0.0)) throw std::invalid_argument("ferro: Ec must be positive");
  if (!(t_fe > 0.0)) throw std::invalid_argument("ferro: T_fe must be positive");
  if (!(tau_eff > 0.0))
    throw std::invalid_argument("ferro: tau_eff must be positive");
  if (!(area > 0.0)) throw std::invalid_argument("ferro: area must be positive");
}

BranchState BranchState::negative_remanent(const FerroParams& params) {
  BranchState s;
  s.direction = Direction::kAscending;
  s.p = branch_polarization(s, 0.0, params);
  return s;
}

BranchState BranchState::positive_remanent(const FerroParams& params) {
  BranchState s;
  s.direction = Direction::kDescending;
  s.p = branch_polarization(s, 0.0, params);
  return s;
}

double delta_of(const FerroParams& params) {
  if (!(params.pr > 0.0) || !(params.pr < params.ps))
    throw std::invalid_argument("delta_of: require 0 < Pr < Ps");
  const double ratio = params.pr / params.ps;
  return params.ec / std::log((1.0 + ratio) / (1.0 - ratio));
}

double branch_polarization(const BranchState& state, double e,
                           const FerroParams& params) {
  const double delta = delta_of(params);
  const double x = shifted_field(state.direction, e, params.ec) / (2.0 * delta);
  return state.k * params.ps * std::tanh(x) + state.p_off;
}

double branch_slope(const BranchState& state, double e,
                    const FerroParams& params) {
  const double delta = delta_of(params);
  const double x = shifted_field(state.direction, e, params.ec) / (2.0 * delta);
  const double sech = 1.0 / std::cosh(x);
  return state.k * params.ps * sech * sech / (2.0 * delta);
}

double advance_field(double e_eff, double e_ext, double dt, double tau_eff) {
  if (dt <= 0.0) return e_eff;
  return e_ext + (e_eff - e_ext) * std::exp(-dt / tau_eff);
}

BranchState reverse_branch(const BranchState& state, const FerroParams& params) {
  const double delta = delta_of(params);
  BranchState next = state;
  next.direction = state.direction == Direction::kAscending
                       ? Direction::kDescending
                       : Direction::kAscending;

  // Continuity:  k*Ps*t + P_off = P_t
  // Saturation:  k*Ps + P_off = +Ps (ascending) or -k*Ps + P_off = -Ps.
  const double t = std::tanh(shifted_field(next.direction, state.e_eff, params.ec) /
                             (2.0 * delta));
  const double ps = params.ps;
  double denom;
  double numer;
  if (next.direction == Direction::kAscending) {
    denom = ps * (1.0 - t);
    numer = ps - state.p;
  } else {
    denom = ps * (1.0 + t);
    numer = ps + state.p;
  }

  if (denom <= 0.0 || !std::isfinite(numer / denom)) {
    // Turning point at exact saturation: fall back to the major loop.
    next.k = 1.0;
    next.p_off = 0.0;
  } else {
    next.k = std::clamp(numer / denom, kMinScale, 1.0);
    next.p_off = state.p - next.k * ps * t;
    if (next.k == 1.0 && std::abs(next.p_off) < 1e-15) next.p_off = 0.0;
  }
  next.p = state.p;
  return next;
}

BranchState apply_pulse(const BranchState& state, double v_fe, double duration,
                        int nsteps, const FerroParams& params) {
  if (nsteps < 1) throw std::invalid_argument("apply_pulse: nsteps must be >= 1");
  const double e_ext = v_fe / params.t_fe;
  const double dt = duration / nsteps;
  BranchState s = state;
  for (int i = 0; i < nsteps; ++i) {
    // The drive is constant inside a sub-step, so E_eff moves monotonically
    // and the only possible turning point is at the sub-step boundary.
    if (e_ext > s.e_eff && s.direction == Direction::kDescending) {
      s = reverse_branch(s, params);
    } else if (e_ext < s.e_eff && s.direction == Direction::kAscending) {
      s = reverse_branch(s, params);
    }
    const double e_next = advance_field(s.e_eff, e_ext, dt, params.tau_eff);
    if (e_next == s.e_eff) continue;
    s.e_eff = e_next;
    s.p = std::clamp(branch_polarization(s, s.e_eff, params), -params.ps,
                     params.ps);
  }
  return s;
}

std::vector<LoopPoint> trace_loop(const FerroParams& params, double v_amplitude,
                                  int nsteps) {
  params.validate();
  if (nsteps < 4) throw std::invalid_argument("trace_loop: nsteps must be >= 4");
  std::vector<LoopPoint> out;
  out.reserve(static_cast<size_t>(nsteps) + 1);

  BranchState s = BranchState::negative_remanent(params);
  out.push_back({0.0, s.p});
  const double hold = 50.0 * params.tau_eff;
  // Triangle with period 4 quarter-legs: up to +A, down to -A, back to 0.
  for (int i = 1; i <= nsteps; ++i) {
    const double phase = 4.0 * static_cast<double>(i) / nsteps;
    double v;
    if (phase <= 1.0) {
      v = v_amplitude * phase;
    } else if (phase <= 3.0) {
      v = v_amplitude * (2.0 - phase);
    } else {
      v = v_amplitude * (phase - 4.0);
    }
    s = apply_pulse(s, v, hold, 1, params);
    out.push_back({v, s.p});
  }
  return out;
}

}  // namespace fecand
