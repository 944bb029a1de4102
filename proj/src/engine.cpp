#include "fecand/engine.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fecand/error.hpp"

namespace fecand {

ArrayState ArrayState::uniform(const ArrayConfig& config, const Technology& tech,
                               const FeFetState& cell) {
  config.validate();
  ArrayState s;
  s.config = config;
  s.tech = tech;
  s.cells.assign(static_cast<size_t>(config.rows) * static_cast<size_t>(config.cols),
                 cell);
  return s;
}

double ReadResult::current_at(int col) const {
  for (size_t i = 0; i < bl_index.size(); ++i)
    if (bl_index[i] == col) return bl_current[i];
  throw std::out_of_range("ReadResult: column was not selected");
}

// ---------------------------------------------------------------------------
// Writes

namespace {

void check_plan_matches(const ArrayState& state, const BiasPlan& plan) {
  if (plan.topology != state.config.topology || plan.rows != state.config.rows ||
      plan.cols != state.config.cols)
    throw std::invalid_argument("plan does not match the array topology/size");
  plan.validate();
}

// Writes must never bias a channel: every device needs V_DS = 0.
void check_no_channel_bias(const BiasPlan& plan) {
  const auto& bl = plan.of(LineKind::kBitLine);
  const auto& sl = plan.of(LineKind::kSelectLine);
  if (plan.topology == Topology::kCand) {
    auto grounded = [](const Drive& d) { return !d.high_z && d.volts == 0.0; };
    if (!std::all_of(bl.begin(), bl.end(), grounded) ||
        !std::all_of(sl.begin(), sl.end(), grounded))
      throw std::invalid_argument("C-AND write plan must ground every SL and BL");
  } else {
    for (size_t c = 0; c < bl.size(); ++c)
      if (bl[c].high_z || sl[c].high_z || bl[c].volts != sl[c].volts)
        throw std::invalid_argument("AND write plan must hold BL = SL per column");
  }
}

}  // namespace

ArrayState apply_write(const ArrayState& state, const BiasPlan& plan) {
  check_plan_matches(state, plan);
  if (plan.op == Operation::kRead)
    throw std::invalid_argument("apply_write: read plan");
  if (plan.is_write()) check_no_channel_bias(plan);

  const Technology& t = state.tech;
  ArrayState out = state;
  for (int r = 0; r < state.config.rows; ++r) {
    for (int c = 0; c < state.config.cols; ++c) {
      const double v_gb = plan.is_write() ? cell_write_voltage(plan, r, c) : 0.0;
      FeFetState& cell = out.cell(r, c);
      cell = write_cell(cell, v_gb, plan.duration, t.ferro, t.fet);
      if (t.settle > 0.0) cell = write_cell(cell, 0.0, t.settle, t.ferro, t.fet);
    }
  }
  return out;
}

std::vector<double> accumulate_disturb(const ArrayState& state, int row, int col,
                                       double v_disturb, int pulse_count,
                                       double pulse_width) {
  if (pulse_count < 0) throw std::invalid_argument("pulse_count must be >= 0");
  const Technology& t = state.tech;
  FeFetState cell = state.cell(row, col);
  std::vector<double> trace;
  trace.reserve(static_cast<size_t>(pulse_count) + 1);
  trace.push_back(cell.vt);
  for (int i = 0; i < pulse_count; ++i) {
    cell = write_and_settle(cell, v_disturb, pulse_width, pulse_width, t.ferro, t.fet);
    trace.push_back(cell.vt);
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Reads: nonlinear nodal analysis

namespace {

struct Terminal {
  int node = -1;  // -1: fixed potential
  double v = 0.0;
};

struct Line {
  bool high_z = false;
  double drive = 0.0;
  double g_seg = 0.0;  // inf when the line has no resistance
  int first = -1;      // first unknown, -1 when fixed
  int count = 0;       // unknowns owned by the line

  Terminal at(int pos) const {
    if (first < 0) return {-1, drive};
    return {count == 1 ? first : first + pos, 0.0};
  }
};

struct Device {
  Terminal a;  // drain side
  Terminal b;  // source side
  double vg = 0.0;
  double vbulk = 0.0;
  double vt = 0.0;
};

struct Network {
  std::vector<Line> lines;
  std::vector<Device> devices;
  // Which line each device terminal sits on, for driver current bookkeeping.
  std::vector<int> line_a;
  std::vector<int> line_b;
  int unknowns = 0;
};

Line make_line(const Drive& d, int length, double r_seg, int& next) {
  Line line;
  line.high_z = d.high_z;
  line.drive = d.volts;
  line.g_seg = r_seg > 0.0 ? 1.0 / r_seg : std::numeric_limits<double>::infinity();
  if (r_seg > 0.0) {
    line.first = next;
    line.count = length;
  } else if (d.high_z) {
    line.first = next;
    line.count = 1;
  }
  next += line.count;
  return line;
}

Network build_network(const ArrayState& state, const BiasPlan& plan) {
  const ArrayConfig& cfg = state.config;
  const int m = cfg.rows;
  const int n = cfg.cols;
  const double rm = cfg.parasitics.rm;
  Network net;
  int next = 0;

  auto gate_of = [&](int r) {
    const Drive& d = plan.of(LineKind::kWordLine)[static_cast<size_t>(r)];
    return d.high_z ? 0.0 : d.volts;
  };

  if (cfg.topology == Topology::kCand) {
    // Lines 0..m-1: SL per row (along x); lines m..m+n-1: BL per column.
    for (int r = 0; r < m; ++r)
      net.lines.push_back(make_line(plan.of(LineKind::kSelectLine)[static_cast<size_t>(r)],
                                    n, rm * cfg.segment_x_um(), next));
    for (int c = 0; c < n; ++c)
      net.lines.push_back(make_line(plan.of(LineKind::kBitLine)[static_cast<size_t>(c)],
                                    m, rm * cfg.segment_y_um(), next));
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < n; ++c) {
        const Drive& bul = plan.of(LineKind::kBulkLine)[static_cast<size_t>(c)];
        Device d;
        d.a = net.lines[static_cast<size_t>(r)].at(c);
        d.b = net.lines[static_cast<size_t>(m + c)].at(r);
        d.vg = gate_of(r);
        d.vbulk = bul.high_z ? 0.0 : bul.volts;
        d.vt = state.cell(r, c).vt;
        net.devices.push_back(d);
        net.line_a.push_back(r);
        net.line_b.push_back(m + c);
      }
    }
  } else {
    // Lines 0..n-1: BL per column; lines n..2n-1: SL per column.
    for (int c = 0; c < n; ++c)
      net.lines.push_back(make_line(plan.of(LineKind::kBitLine)[static_cast<size_t>(c)],
                                    m, rm * cfg.segment_y_um(), next));
    for (int c = 0; c < n; ++c)
      net.lines.push_back(make_line(plan.of(LineKind::kSelectLine)[static_cast<size_t>(c)],
                                    m, rm * cfg.segment_y_um(), next));
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < n; ++c) {
        Device d;
        d.a = net.lines[static_cast<size_t>(c)].at(r);
        d.b = net.lines[static_cast<size_t>(n + c)].at(r);
        d.vg = gate_of(r);
        d.vbulk = 0.0;
        d.vt = state.cell(r, c).vt;
        net.devices.push_back(d);
        net.line_a.push_back(c);
        net.line_b.push_back(n + c);
      }
    }
  }
  net.unknowns = next;
  return net;
}

double potential(const Terminal& t, const Eigen::VectorXd& x) {
  return t.node < 0 ? t.v : x[t.node];
}

class Assembler {
 public:
  Assembler(const Network& net, const FeFetParams& fet, double g_float)
      : net_(net), fet_(fet), g_float_(g_float) {}

  // Residual = net current leaving each unknown node.
  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& f,
                std::vector<Eigen::Triplet<double>>* jac) const {
    f.setZero(net_.unknowns);
    if (jac) jac->clear();
    auto stamp_g = [&](const Terminal& p, const Terminal& q, double g) {
      const double i = g * (potential(p, x) - potential(q, x));
      if (p.node >= 0) f[p.node] += i;
      if (q.node >= 0) f[q.node] -= i;
      if (!jac) return;
      if (p.node >= 0) jac->emplace_back(p.node, p.node, g);
      if (q.node >= 0) jac->emplace_back(q.node, q.node, g);
      if (p.node >= 0 && q.node >= 0) {
        jac->emplace_back(p.node, q.node, -g);
        jac->emplace_back(q.node, p.node, -g);
      }
    };

    for (const Line& line : net_.lines) {
      if (line.first < 0) continue;
      for (int k = 0; k + 1 < line.count; ++k)
        stamp_g({line.first + k, 0.0}, {line.first + k + 1, 0.0}, line.g_seg);
      if (line.high_z)
        stamp_g({line.first, 0.0}, {-1, 0.0}, g_float_);
      else
        stamp_g({line.first, 0.0}, {-1, line.drive}, line.g_seg);
    }

    for (const Device& d : net_.devices) {
      const ChannelEval e = channel_current(potential(d.a, x), potential(d.b, x), d.vg,
                                            d.vbulk, d.vt, fet_);
      if (d.a.node >= 0) f[d.a.node] += e.current;
      if (d.b.node >= 0) f[d.b.node] -= e.current;
      if (!jac) continue;
      if (d.a.node >= 0) {
        jac->emplace_back(d.a.node, d.a.node, e.d_va);
        if (d.b.node >= 0) jac->emplace_back(d.a.node, d.b.node, e.d_vb);
      }
      if (d.b.node >= 0) {
        jac->emplace_back(d.b.node, d.b.node, -e.d_vb);
        if (d.a.node >= 0) jac->emplace_back(d.b.node, d.a.node, -e.d_va);
      }
    }
  }

 private:
  const Network& net_;
  const FeFetParams& fet_;
  double g_float_;
};

Eigen::VectorXd initial_guess(const Network& net) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(net.unknowns);
  for (const Line& line : net.lines) {
    if (line.first < 0 || line.high_z) continue;
    for (int k = 0; k < line.count; ++k) x[line.first + k] = line.drive;
  }
  return x;
}

}  // namespace

ReadResult solve_read(const ArrayState& state, const BiasPlan& plan,
                      const SolverOptions& options) {
  check_plan_matches(state, plan);
  if (plan.op != Operation::kRead && plan.op != Operation::kIdle)
    throw std::invalid_argument("solve_read: plan is not a read or idle plan");

  const Network net = build_network(state, plan);
  const Assembler assembler(net, state.tech.fet, options.g_float);

  ReadResult result;
  result.rows = state.config.rows;
  result.cols = state.config.cols;
  Eigen::VectorXd x = initial_guess(net);

  if (net.unknowns > 0) {
    Eigen::VectorXd f(net.unknowns);
    Eigen::VectorXd f_trial(net.unknowns);
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::SparseMatrix<double> jac(net.unknowns, net.unknowns);
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    bool analyzed = false;

    assembler.residual(x, f, &triplets);
    double norm = f.cwiseAbs().maxCoeff();
    int it = 0;
    for (;; ++it) {
      result.residual_history.push_back(norm);
      if (norm < options.tolerance) break;
      if (it >= options.max_iterations)
        throw SolverError("solve_read: Newton did not converge", result.residual_history);

      jac.setFromTriplets(triplets.begin(), triplets.end());
      if (!analyzed) {
        lu.analyzePattern(jac);
        analyzed = true;
      }
      lu.factorize(jac);
      if (lu.info() != Eigen::Success)
        throw SolverError("solve_read: singular Jacobian", result.residual_history);
      Eigen::VectorXd dx = lu.solve(-f);
      const double biggest = dx.cwiseAbs().maxCoeff();
      if (biggest > options.max_step) dx *= options.max_step / biggest;

      // Halve the update while the residual grows; keep the last try anyway
      // so a locally non-monotone path can still make progress.
      double lambda = 1.0;
      Eigen::VectorXd trial = x + dx;
      assembler.residual(trial, f_trial, nullptr);
      double trial_norm = f_trial.cwiseAbs().maxCoeff();
      for (int h = 0; h < 8 && !(trial_norm < norm); ++h) {
        lambda *= 0.5;
        trial = x + lambda * dx;
        assembler.residual(trial, f_trial, nullptr);
        trial_norm = f_trial.cwiseAbs().maxCoeff();
      }
      x = trial;
      assembler.residual(x, f, &triplets);
      norm = f.cwiseAbs().maxCoeff();
    }
    result.iterations = it;
    result.residual = norm;
  }

  // Device currents and the current each line hands to its driver.
  std::vector<double> into_line(net.lines.size(), 0.0);
  result.cell_current.resize(net.devices.size());
  for (size_t i = 0; i < net.devices.size(); ++i) {
    const Device& d = net.devices[i];
    const double current = channel_current(potential(d.a, x), potential(d.b, x), d.vg,
                                           d.vbulk, d.vt, state.tech.fet)
                                .current;
    result.cell_current[i] = current;
    into_line[static_cast<size_t>(net.line_a[i])] -= current;
    into_line[static_cast<size_t>(net.line_b[i])] += current;
  }
  auto driver_current = [&](size_t li) {
    const Line& line = net.lines[li];
    if (line.first >= 0 && !line.high_z && std::isfinite(line.g_seg))
      return line.g_seg * (x[line.first] - line.drive);
    return into_line[li];
  };

  const int m = state.config.rows;
  const int n = state.config.cols;
  const bool cand = state.config.topology == Topology::kCand;
  for (int c : plan.selected_cols) {
    const size_t li = static_cast<size_t>(cand ? m + c : c);
    result.bl_index.push_back(c);
    // C-AND senses current sinking into the grounded BL; AND senses the
    // current the driven BL delivers.
    result.bl_current.push_back(cand ? driver_current(li) : -driver_current(li));
  }
  if (cand && plan.selected_row >= 0) {
    result.supply_current = -driver_current(static_cast<size_t>(plan.selected_row));
  } else {
    for (int c : plan.selected_cols) result.supply_current -= driver_current(static_cast<size_t>(c));
  }
  (void)n;
  return result;
}

ReadResult read_cell(const ArrayState& state, int row, int col,
                     const SolverOptions& options) {
  const int cols[] = {col};
  const BiasPlan plan = state.config.topology == Topology::kCand
                            ? cand_read_bias(row, cols, state.config, state.tech.bias)
                            : and_read_bias(row, col, state.config, state.tech.bias);
  return solve_read(state, plan, options);
}

ReadResult read_word(const ArrayState& state, int row, const SolverOptions& options) {
  if (state.config.topology != Topology::kCand)
    throw std::invalid_argument("read_word: whole-word reads need the C-AND array");
  std::vector<int> cols(static_cast<size_t>(state.config.cols));
  std::iota(cols.begin(), cols.end(), 0);
  return solve_read(state, cand_read_bias(row, cols, state.config, state.tech.bias),
                    options);
}

// ---------------------------------------------------------------------------
// Column model

namespace {

struct Group {
  double count = 0.0;
  double vt = 0.0;
};

// Solves the merged two-node sneak network of a C-AND read.
//   top:  selected-row devices, SL_sel (V_SL) -> A, gate V_WL
//   diag: unselected devices, A -> B, gate 0
//   col:  selected-column devices, B -> BL_sel (0 V), gate 0
ColumnReadout solve_cand_sneak(const Technology& tech, const std::vector<Group>& top,
                               const std::vector<Group>& diag,
                               const std::vector<Group>& col, double g_float_a,
                               double g_float_b, const SolverOptions& options) {
  const double vsl = tech.bias.vsl;
  const double vwl = tech.bias.vwl;
  const FeFetParams& fet = tech.fet;

  struct Eval {
    double fa, fb, jaa, jab, jba, jbb, leak;
  };
  auto eval = [&](double a, double b) {
    Eval e{};
    e.fa = g_float_a * a;
    e.jaa = g_float_a;
    e.fb = g_float_b * b;
    e.jbb = g_float_b;
    for (const Group& g : top) {
      const ChannelEval c = channel_current(vsl, a, vwl, 0.0, g.vt, fet);
      e.fa -= g.count * c.current;
      e.jaa -= g.count * c.d_vb;
    }
    for (const Group& g : diag) {
      const ChannelEval c = channel_current(a, b, 0.0, 0.0, g.vt, fet);
      e.fa += g.count * c.current;
      e.jaa += g.count * c.d_va;
      e.jab += g.count * c.d_vb;
      e.fb -= g.count * c.current;
      e.jba -= g.count * c.d_va;
      e.jbb -= g.count * c.d_vb;
    }
    for (const Group& g : col) {
      const ChannelEval c = channel_current(b, 0.0, 0.0, 0.0, g.vt, fet);
      e.fb += g.count * c.current;
      e.jbb += g.count * c.d_va;
      e.leak += g.count * c.current;
    }
    return e;
  };

  double a = vsl;
  double b = 0.5 * vsl;
  std::vector<double> history;
  Eval e = eval(a, b);
  double norm = std::max(std::abs(e.fa), std::abs(e.fb));
  for (int it = 0;; ++it) {
    history.push_back(norm);
    if (norm < options.tolerance) break;
    if (it >= options.max_iterations)
      throw SolverError("column_readout: sneak network did not converge", history);
    const double det = e.jaa * e.jbb - e.jab * e.jba;
    double da = -(e.fa * e.jbb - e.jab * e.fb) / det;
    double db = -(e.jaa * e.fb - e.jba * e.fa) / det;
    const double biggest = std::max(std::abs(da), std::abs(db));
    if (biggest > options.max_step) {
      da *= options.max_step / biggest;
      db *= options.max_step / biggest;
    }
    double lambda = 1.0;
    Eval trial = eval(a + da, b + db);
    double trial_norm = std::max(std::abs(trial.fa), std::abs(trial.fb));
    for (int h = 0; h < 30 && !(trial_norm < norm); ++h) {
      lambda *= 0.5;
      trial = eval(a + lambda * da, b + lambda * db);
      trial_norm = std::max(std::abs(trial.fa), std::abs(trial.fb));
    }
    a += lambda * da;
    b += lambda * db;
    e = trial;
    norm = trial_norm;
  }

  ColumnReadout out;
  out.i_leak = e.leak;
  out.v_bl_unsel = a;
  out.v_sl_unsel = b;
  return out;
}

}  // namespace

ColumnReadout column_readout_with_leak(const ArrayState& state, int column,
                                       int selected_row, const SolverOptions& options) {
  const ArrayConfig& cfg = state.config;
  if (column < 0 || column >= cfg.cols || selected_row < 0 || selected_row >= cfg.rows)
    throw std::out_of_range("column_readout_with_leak: address out of range");
  const Technology& t = state.tech;
  const double vwl = t.bias.vwl;
  const double vsl = t.bias.vsl;

  if (cfg.topology == Topology::kAnd) {
    ColumnReadout out;
    out.i_selected = drain_current(vwl, vsl, state.cell(selected_row, column).vt, t.fet);
    for (int r = 0; r < cfg.rows; ++r)
      if (r != selected_row)
        out.i_leak += drain_current(0.0, vsl, state.cell(r, column).vt, t.fet);
    return out;
  }

  std::vector<Group> top;
  std::vector<Group> diag;
  std::vector<Group> col;
  for (int r = 0; r < cfg.rows; ++r) {
    for (int c = 0; c < cfg.cols; ++c) {
      const double vt = state.cell(r, c).vt;
      if (r == selected_row && c != column) top.push_back({1.0, vt});
      if (r != selected_row && c != column) diag.push_back({1.0, vt});
      if (r != selected_row && c == column) col.push_back({1.0, vt});
    }
  }
  ColumnReadout out = solve_cand_sneak(t, top, diag, col, (cfg.cols - 1) * options.g_float,
                                       (cfg.rows - 1) * options.g_float, options);
  out.i_selected = drain_current(vwl, vsl, state.cell(selected_row, column).vt, t.fet);
  return out;
}

ColumnReadout column_readout_uniform(const Technology& tech, Topology topology,
                                     int rows, int cols, const FeFetState& selected,
                                     const FeFetState& others,
                                     const SolverOptions& options) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("column_readout: bad size");
  const double vwl = tech.bias.vwl;
  const double vsl = tech.bias.vsl;
  const double m1 = rows - 1;
  const double n1 = cols - 1;

  if (topology == Topology::kAnd) {
    ColumnReadout out;
    out.i_selected = drain_current(vwl, vsl, selected.vt, tech.fet);
    out.i_leak = m1 * drain_current(0.0, vsl, others.vt, tech.fet);
    return out;
  }
  const std::vector<Group> top{{n1, others.vt}};
  const std::vector<Group> diag{{m1 * n1, others.vt}};
  const std::vector<Group> col{{m1, others.vt}};
  ColumnReadout out = solve_cand_sneak(tech, top, diag, col, n1 * options.g_float,
                                       m1 * options.g_float, options);
  out.i_selected = drain_current(vwl, vsl, selected.vt, tech.fet);
  return out;
}

}  // namespace fecand
