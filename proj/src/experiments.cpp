#include "fecand/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace fecand {

namespace {

constexpr double kEps0 = 8.8541878128e-12;

std::vector<int> powers_of_two(int lo, int hi) {
  std::vector<int> out;
  for (int s = lo; s <= hi; s *= 2) out.push_back(s);
  return out;
}

std::string hex_word(std::uint32_t w, int bits) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%0*X", (bits + 3) / 4, w);
  return buf;
}

}  // namespace

std::string describe(const Technology& t) {
  std::string s;
  auto kv = [&](const char* k, double v) {
    s += k;
    s += '=';
    s += fmt(v);
    s += '\n';
  };
  kv("ferro.ps", t.ferro.ps);
  kv("ferro.pr", t.ferro.pr);
  kv("ferro.ec", t.ferro.ec);
  kv("ferro.t_fe", t.ferro.t_fe);
  kv("ferro.tau_eff", t.ferro.tau_eff);
  kv("ferro.area", t.ferro.area);
  kv("fet.w", t.fet.w);
  kv("fet.l", t.fet.l);
  kv("fet.vt_mid", t.fet.vt_mid);
  kv("fet.mw", t.fet.mw);
  kv("fet.s", t.fet.s);
  kv("fet.i_spec", t.fet.i_spec);
  kv("fet.n_slope", t.fet.n_slope);
  kv("fet.g_min", t.fet.g_min);
  s += std::string("fet.gate_mode=") + to_string(t.fet.gate_mode) + "\n";
  kv("fet.c_il", t.fet.c_il);
  kv("fet.eps_fe", t.fet.eps_fe);
  kv("fet.v_depletion", t.fet.v_depletion);
  kv("fet.depletion_width", t.fet.depletion_width);
  kv("bias.vw0", t.bias.vw0);
  kv("bias.vw1", t.bias.vw1);
  kv("bias.vwl", t.bias.vwl);
  kv("bias.vsl", t.bias.vsl);
  kv("bias.t_pulse", t.bias.t_pulse);
  kv("settle", t.settle);
  kv("wire.rm", t.parasitics.rm);
  kv("wire.cm", t.parasitics.cm);
  kv("wire.rp", t.parasitics.rp);
  kv("wire.cp", t.parasitics.cp);
  kv("lambda", t.lambda);
  kv("bulk_spacing", t.bulk_spacing);
  return s;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------

ExperimentReport device_sweep(const Technology& tech, double vgs_min, double vgs_max,
                              int points) {
  if (points < 2 || !(vgs_max > vgs_min))
    throw std::invalid_argument("device_sweep: need points >= 2 and vgs_max > vgs_min");
  ExperimentReport rep;
  rep.id = "device-sweep";
  rep.digest = digest_of(rep.id + "\n" + describe(tech) + fmt(vgs_min) + fmt(vgs_max) +
                         fmt(points));
  const FeFetState c0 = tech.written_cell(false);
  const FeFetState c1 = tech.written_cell(true);
  Table t{"device_sweep", {"vgs_volts", "ids_amps_state0", "ids_amps_state1"}, {}};
  bool monotone = true;
  double prev0 = -1.0, prev1 = -1.0;
  for (int i = 0; i < points; ++i) {
    const double vgs = vgs_min + (vgs_max - vgs_min) * i / (points - 1);
    const double i0 = drain_current(vgs, tech.bias.vsl, c0.vt, tech.fet);
    const double i1 = drain_current(vgs, tech.bias.vsl, c1.vt, tech.fet);
    monotone = monotone && i0 >= prev0 && i1 >= prev1;
    prev0 = i0;
    prev1 = i1;
    t.add({fmt(vgs), fmt(i0), fmt(i1)});
  }
  rep.tables.push_back(std::move(t));
  rep.metric("vt_state0", c0.vt);
  rep.metric("vt_state1", c1.vt);
  rep.metric("i_read_state0", drain_current(tech.bias.vwl, tech.bias.vsl, c0.vt, tech.fet));
  rep.metric("i_read_state1", drain_current(tech.bias.vwl, tech.bias.vsl, c1.vt, tech.fet));
  rep.check("ids_monotone_in_vgs", monotone);
  rep.check("read_bias_inside_window",
            std::min(c0.vt, c1.vt) < tech.bias.vwl && tech.bias.vwl < std::max(c0.vt, c1.vt));
  return rep;
}

ExperimentReport hysteresis_loop(const Technology& tech, double amplitude, int nsteps) {
  ExperimentReport rep;
  rep.id = "hysteresis";
  rep.digest = digest_of(rep.id + "\n" + describe(tech) + fmt(amplitude) + fmt(nsteps));
  const auto trace = trace_loop(tech.ferro, amplitude, nsteps);
  Table t{"hysteresis", {"v_volts", "p_c_per_m2"}, {}};
  bool bounded = true;
  for (const auto& p : trace) {
    bounded = bounded && std::abs(p.p) <= tech.ferro.ps;
    t.add({fmt(p.v), fmt(p.p)});
  }
  rep.tables.push_back(std::move(t));
  rep.check("polarization_bounded", bounded);
  rep.metric("p_start", trace.front().p);
  rep.metric("p_end", trace.back().p);
  return rep;
}

ExperimentReport scheme_audit(double vw0, double vw1, WriteScheme scheme,
                              double partial_margin) {
  ExperimentReport rep;
  rep.id = "verify-scheme";
  rep.digest = digest_of(rep.id + fmt(vw0) + fmt(vw1) + to_string(scheme) +
                         fmt(partial_margin));
  const DisturbReport r =
      verify_scheme(vw0, vw1, scheme, DisturbThresholds{-vw0, vw1}, partial_margin);
  Table t{"scheme_audit", {"op", "group", "v_gb_volts", "flag", "margin_volts"}, {}};
  for (const auto& e : r.entries)
    t.add({to_string(e.op), to_string(e.group), fmt(e.v_gb), to_string(e.flag),
           fmt(e.margin)});
  rep.tables.push_back(std::move(t));
  rep.check("no_disturb", !r.any_disturb());
  return rep;
}

// ---------------------------------------------------------------------------

ExperimentReport long_bitline_sweep(const Technology& tech,
                                    const LongBitlineOptions& options) {
  const std::vector<int> sizes =
      options.sizes.empty() ? powers_of_two(2, 2048) : options.sizes;
  for (int s : sizes)
    if (s < 2) throw std::invalid_argument("long_bitline_sweep: sizes must be >= 2");

  ExperimentReport rep;
  rep.id = "long-bitline";
  std::string in = rep.id + "\n" + describe(tech);
  for (int s : sizes) in += fmt(s) + ",";
  rep.digest = digest_of(in);

  const FeFetState c0 = tech.written_cell(false);
  const FeFetState c1 = tech.written_cell(true);
  const Topology topologies[] = {Topology::kAnd, Topology::kCand};
  struct Point {
    double i0 = 0.0, i1 = 0.0;
  };
  std::vector<Point> points(sizes.size() * 2);
  parallel_for(static_cast<int>(points.size()), options.threads, [&](int i) {
    const int s = sizes[static_cast<size_t>(i / 2)];
    const Topology t = topologies[i % 2];
    // Worst cases: a '0' among '1's leaks most, a '1' among '0's least.
    points[static_cast<size_t>(i)].i0 = column_readout_uniform(tech, t, s, s, c0, c1).total();
    points[static_cast<size_t>(i)].i1 = column_readout_uniform(tech, t, s, s, c1, c0).total();
  });

  Table t{"long_bitline", {"rows", "topology", "i_read0_amps", "i_read1_amps", "window_ratio"},
          {}};
  for (size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    t.add({fmt(sizes[i / 2]), to_string(topologies[i % 2]), fmt(p.i0), fmt(p.i1),
           fmt(p.i1 / p.i0)});
  }
  rep.tables.push_back(std::move(t));

  auto at = [&](size_t k, int topo) { return points[2 * k + static_cast<size_t>(topo)]; };
  bool and_mono = true, and_window_mono = true, cand_window_mono = true, cand_ge = true;
  for (size_t k = 0; k < sizes.size(); ++k) {
    const double wa = at(k, 0).i1 / at(k, 0).i0;
    const double wc = at(k, 1).i1 / at(k, 1).i0;
    cand_ge = cand_ge && wc >= wa;
    if (k == 0 || sizes[k] <= sizes[k - 1]) continue;
    and_mono = and_mono && at(k, 0).i0 >= at(k - 1, 0).i0;
    and_window_mono = and_window_mono && wa <= at(k - 1, 0).i1 / at(k - 1, 0).i0;
    cand_window_mono = cand_window_mono && wc <= at(k - 1, 1).i1 / at(k - 1, 1).i0;
  }
  rep.check("and_read0_nondecreasing", and_mono);
  rep.check("and_window_nonincreasing", and_window_mono);
  rep.check("cand_window_nonincreasing", cand_window_mono);
  rep.check("cand_window_at_least_and", cand_ge);

  for (size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] == 2) {
      const double wa = at(k, 0).i1 / at(k, 0).i0;
      const double wc = at(k, 1).i1 / at(k, 1).i0;
      rep.check("size2_windows_within_10pct",
                std::abs(wa - wc) <= 0.1 * std::max(wa, wc),
                "and " + fmt(wa) + ", cand " + fmt(wc));
    }
    if (sizes[k] == 2048) {
      const double and0 = at(k, 0).i0;
      const double cand0 = at(k, 1).i0;
      const double cand_ratio = at(k, 1).i1 / cand0;
      rep.metric("and_read0_2048", and0);
      rep.metric("cand_read0_2048", cand0);
      rep.metric("cand_on_off_2048", cand_ratio);
      rep.check("and_read0_2048_within_3nA_300nA", and0 >= 3e-9 && and0 <= 300e-9,
                fmt(and0) + " A");
      rep.check("and_over_cand_read0_2048_ge_100", and0 >= 100.0 * cand0,
                "ratio " + fmt(and0 / cand0));
      rep.check("cand_on_off_2048_ge_1e3", cand_ratio >= 1e3, fmt(cand_ratio));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

ExperimentReport disturb_matrix(const Technology& tech, int rows, int cols) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("disturb_matrix: need >= 2x2");
  ExperimentReport rep;
  rep.id = "disturb-matrix";
  rep.digest = digest_of(rep.id + "\n" + describe(tech) + fmt(rows) + "x" + fmt(cols));

  const ArrayConfig cfg = tech.array(Topology::kCand, rows, cols);
  const int sel_cols[] = {0};
  const std::pair<int, int> corners[] = {
      {0, 0}, {0, cols - 1}, {rows - 1, 0}, {rows - 1, cols - 1}};

  Table t{"disturb_matrix",
          {"initial", "op", "group", "row", "col", "vt_before_volts", "vt_after_volts",
           "i_before_amps", "i_after_amps", "bit_before", "bit_after"},
          {}};

  bool selected_ok = true, preserved = true, diag_w1_unchanged = true,
       diag_one_w0_high = true;
  double min_one = std::numeric_limits<double>::infinity();
  double max_zero = 0.0;
  std::vector<double> diag_one_after_w0;

  struct Row {
    int initial;
    Operation op;
    CellGroup group;
    int r, c;
    double vt_b, vt_a, i_b, i_a;
    bool b_b, b_a;
  };
  std::vector<Row> out(16);
  parallel_for(4, 0, [&](int scenario) {
    const int initial = scenario / 2;
    const Operation op = scenario % 2 == 0 ? Operation::kWrite0 : Operation::kWrite1;
    const ArrayState before =
        ArrayState::uniform(cfg, tech, tech.written_cell(initial == 1));
    const ArrayState after =
        apply_write(before, cand_write_bias(op, 0, sel_cols, cfg, tech.bias));
    for (int k = 0; k < 4; ++k) {
      const auto [r, c] = corners[k];
      Row& row = out[static_cast<size_t>(scenario * 4 + k)];
      row.initial = initial;
      row.op = op;
      row.group = classify(r, c, 0, sel_cols);
      row.r = r;
      row.c = c;
      row.vt_b = before.cell(r, c).vt;
      row.vt_a = after.cell(r, c).vt;
      row.i_b = read_cell(before, r, c).bl_current[0];
      row.i_a = read_cell(after, r, c).bl_current[0];
      row.b_b = before.bit(r, c);
      row.b_a = after.bit(r, c);
    }
  });

  for (const Row& row : out) {
    t.add({fmt(row.initial), to_string(row.op), to_string(row.group), fmt(row.r),
           fmt(row.c), fmt(row.vt_b), fmt(row.vt_a), fmt(row.i_b), fmt(row.i_a),
           fmt(static_cast<int>(row.b_b)), fmt(static_cast<int>(row.b_a))});
    for (const auto& [bit, i] : {std::pair{row.b_b, row.i_b}, std::pair{row.b_a, row.i_a}}) {
      if (bit)
        min_one = std::min(min_one, i);
      else
        max_zero = std::max(max_zero, i);
    }
    if (row.group == CellGroup::kSelected) {
      selected_ok = selected_ok && row.b_a == (row.op == Operation::kWrite1);
    } else {
      preserved = preserved && row.b_a == row.b_b;
    }
    if (row.group == CellGroup::kDiagonal && row.op == Operation::kWrite1)
      // The device is untouched; its readout only moves with the rest of the array.
      diag_w1_unchanged = diag_w1_unchanged && row.vt_a == row.vt_b &&
                          std::abs(row.i_a - row.i_b) <= 1e-3 * row.i_b;
    if (row.group == CellGroup::kDiagonal && row.op == Operation::kWrite0 && row.b_b)
      diag_one_after_w0.push_back(row.i_a);
  }
  for (double i : diag_one_after_w0) diag_one_w0_high = diag_one_w0_high && i >= 10.0 * max_zero;

  rep.tables.push_back(std::move(t));
  const double band = min_one / max_zero;
  rep.metric("min_one_current", min_one);
  rep.metric("max_zero_current", max_zero);
  rep.metric("band_ratio", band);
  rep.check("selected_reaches_target", selected_ok);
  rep.check("unselected_logic_preserved", preserved);
  rep.check("band_separation_ge_1e2", band >= 1e2, fmt(band));
  rep.check("diag_unchanged_by_write1", diag_w1_unchanged);
  rep.check("diag_one_after_write0_10x_above_zero_band", diag_one_w0_high);
  return rep;
}

// ---------------------------------------------------------------------------

WordWrite write_word(const ArrayState& state, int row, const std::vector<bool>& bits,
                     bool ones_first) {
  const ArrayConfig& cfg = state.config;
  if (cfg.topology != Topology::kCand)
    throw std::invalid_argument("write_word: C-AND array required");
  if (static_cast<int>(bits.size()) != cfg.cols)
    throw std::invalid_argument("write_word: word length must equal the column count");
  std::vector<int> zeros, ones;
  for (int c = 0; c < cfg.cols; ++c) (bits[static_cast<size_t>(c)] ? ones : zeros).push_back(c);

  const Technology& tech = state.tech;
  auto phase = [&](Operation op, const std::vector<int>& cols) {
    return cols.empty() ? idle_plan(cfg, tech.bias.t_pulse)
                        : cand_write_bias(op, row, cols, cfg, tech.bias);
  };
  const BiasPlan p0 = phase(Operation::kWrite0, zeros);
  const BiasPlan p1 = phase(Operation::kWrite1, ones);

  WordWrite out;
  out.state = state;
  for (const BiasPlan* p : ones_first ? std::array{&p1, &p0} : std::array{&p0, &p1}) {
    out.state = apply_write(out.state, *p);
    ++out.phases;
  }
  const ReadResult r = read_word(out.state, row);
  const double ref = tech.reference_current();
  for (int c = 0; c < cfg.cols; ++c) {
    const double i = r.current_at(c);
    out.currents.push_back(i);
    out.readback.push_back(i > ref);
  }
  return out;
}

ExperimentReport word_write_demo(const Technology& tech, const WordWriteOptions& options) {
  if (options.cols < 1 || options.cols > 31)
    throw std::invalid_argument("word_write_demo: cols must be in [1, 31]");
  std::vector<std::uint32_t> words = options.words;
  if (words.empty())
    for (std::uint32_t w = 0; w < (1u << options.cols); ++w) words.push_back(w);

  ExperimentReport rep;
  rep.id = "word-write";
  std::string in = rep.id + "\n" + describe(tech) + fmt(options.rows) + "x" +
                   fmt(options.cols) + "@" + fmt(options.row) +
                   (options.ones_first ? "1first" : "0first");
  for (auto w : words) in += fmt(static_cast<long long>(w)) + ",";
  rep.digest = digest_of(in);

  const ArrayConfig cfg = tech.array(Topology::kCand, options.rows, options.cols);
  ArrayState state = ArrayState::uniform(cfg, tech, tech.written_cell(false));
  Table t{"word_write", {"word", "readback", "phases", "match", "min_one_amps", "max_zero_amps"},
          {}};
  bool all_match = true, two_phases = true;
  for (std::uint32_t w : words) {
    std::vector<bool> bits(static_cast<size_t>(options.cols));
    for (int c = 0; c < options.cols; ++c) bits[static_cast<size_t>(c)] = (w >> c) & 1u;
    WordWrite ww = write_word(state, options.row, bits, options.ones_first);
    std::uint32_t rb = 0;
    double min_one = std::numeric_limits<double>::infinity(), max_zero = 0.0;
    for (int c = 0; c < options.cols; ++c) {
      if (ww.readback[static_cast<size_t>(c)]) rb |= 1u << c;
      if (bits[static_cast<size_t>(c)])
        min_one = std::min(min_one, ww.currents[static_cast<size_t>(c)]);
      else
        max_zero = std::max(max_zero, ww.currents[static_cast<size_t>(c)]);
    }
    all_match = all_match && rb == w;
    two_phases = two_phases && ww.phases == 2;
    t.add({hex_word(w, options.cols), hex_word(rb, options.cols), fmt(ww.phases),
           rb == w ? "1" : "0", fmt(min_one), fmt(max_zero)});
    state = std::move(ww.state);
  }
  rep.tables.push_back(std::move(t));
  rep.metric("words", static_cast<double>(words.size()));
  rep.check("readback_matches_every_word", all_match);
  rep.check("exactly_two_phases", two_phases);
  return rep;
}

// ---------------------------------------------------------------------------

void McConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("mc: samples must be >= 1");
  if (sigma_vw0 < 0 || sigma_vw1 < 0 || sigma_wl < 0)
    throw std::invalid_argument("mc: sigmas must be >= 0");
  if (leak_rows < 1 || leak_cols < 1) throw std::invalid_argument("mc: bad leak array size");
  if (histogram_bins < 1) throw std::invalid_argument("mc: histogram_bins must be >= 1");
}

McSample monte_carlo_trial(const Technology& tech, const McConfig& config, int trial,
                           double leak0, double leak1) {
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> unit(0.0, 1.0);
  auto positive = [&](double mean, double sigma) {
    for (;;) {
      const double v = mean + sigma * unit(rng);
      if (v > 0.0) return v;
    }
  };

  McSample s;
  s.vw0 = tech.bias.vw0 + config.sigma_vw0 * unit(rng);
  s.vw1 = tech.bias.vw1 + config.sigma_vw1 * unit(rng);
  if (config.shared_wl) {
    double d;
    do {
      d = config.sigma_wl * unit(rng);
    } while (!(tech.fet.w + d > 0.0 && tech.fet.l + d > 0.0));
    s.w = tech.fet.w + d;
    s.l = tech.fet.l + d;
  } else {
    s.w = positive(tech.fet.w, config.sigma_wl);
    s.l = positive(tech.fet.l, config.sigma_wl);
  }

  Technology t = tech;
  t.bias.vw0 = std::min(s.vw0, -1e-3);
  t.bias.vw1 = std::max(s.vw1, 1e-3);
  t.fet.w = s.w;
  t.fet.l = s.l;
  t.ferro.area = s.w * s.l;

  const ArrayConfig cfg = t.array(Topology::kCand, 2, 2);
  const int sel[] = {0};
  const ArrayState a = apply_write(ArrayState::uniform(cfg, t, t.erased_cell()),
                                   cand_write_bias(Operation::kWrite1, 0, sel, cfg, t.bias));
  const ArrayState b = apply_write(ArrayState::uniform(cfg, t, t.programmed_cell()),
                                   cand_write_bias(Operation::kWrite0, 0, sel, cfg, t.bias));
  s.vt1 = a.cell(0, 0).vt;
  s.vt0 = b.cell(0, 0).vt;
  s.i1 = read_cell(a, 0, 0).bl_current[0] + leak1;
  s.i0 = read_cell(b, 0, 0).bl_current[0] + leak0;
  return s;
}

namespace {

void add_histogram(Table& t, const std::string& name, const std::vector<double>& values,
                   double lo, double hi, int bins) {
  std::vector<long long> counts(static_cast<size_t>(bins), 0);
  const double width = hi > lo ? (hi - lo) / bins : 0.0;
  for (double v : values) {
    int k = width > 0.0 ? static_cast<int>((v - lo) / width) : 0;
    k = std::clamp(k, 0, bins - 1);
    ++counts[static_cast<size_t>(k)];
  }
  for (int k = 0; k < bins; ++k) {
    const double a = width > 0.0 ? lo + k * width : lo;
    const double b = width > 0.0 ? lo + (k + 1) * width : hi;
    t.add({name, fmt(a), fmt(b), fmt(counts[static_cast<size_t>(k)])});
  }
}

}  // namespace

ExperimentReport monte_carlo(const Technology& tech, const McConfig& config) {
  config.validate();
  ExperimentReport rep;
  rep.id = "monte-carlo";
  rep.digest = digest_of(rep.id + "\n" + describe(tech) + fmt(config.samples) +
                         fmt(config.sigma_vw0) + fmt(config.sigma_vw1) +
                         fmt(config.sigma_wl) + (config.shared_wl ? "shared" : "indep") +
                         std::to_string(config.seed) + fmt(config.leak_rows) + "x" +
                         fmt(config.leak_cols) + "/" + fmt(config.histogram_bins));

  // Nominal-corner leakage of the large array, added to every readout.
  const FeFetState c0 = tech.written_cell(false);
  const FeFetState c1 = tech.written_cell(true);
  const double leak0 = column_readout_uniform(tech, Topology::kCand, config.leak_rows,
                                              config.leak_cols, c0, c1)
                           .i_leak;
  const double leak1 = column_readout_uniform(tech, Topology::kCand, config.leak_rows,
                                              config.leak_cols, c1, c0)
                           .i_leak;

  std::vector<McSample> samples(static_cast<size_t>(config.samples));
  parallel_for(config.samples, config.threads, [&](int i) {
    samples[static_cast<size_t>(i)] = monte_carlo_trial(tech, config, i, leak0, leak1);
  });

  Table t{"mc_samples",
          {"trial", "vw0_volts", "vw1_volts", "w_m", "l_m", "vt0_volts", "vt1_volts",
           "i_read0_amps", "i_read1_amps"},
          {}};
  double min_i1 = std::numeric_limits<double>::infinity(), max_i0 = 0.0;
  double min_pair = std::numeric_limits<double>::infinity();
  std::vector<double> vt0, vt1, li0, li1;
  for (size_t i = 0; i < samples.size(); ++i) {
    const McSample& s = samples[i];
    t.add({fmt(static_cast<long long>(i)), fmt(s.vw0), fmt(s.vw1), fmt(s.w), fmt(s.l),
           fmt(s.vt0), fmt(s.vt1), fmt(s.i0), fmt(s.i1)});
    min_i1 = std::min(min_i1, s.i1);
    max_i0 = std::max(max_i0, s.i0);
    min_pair = std::min(min_pair, s.i1 / s.i0);
    vt0.push_back(s.vt0);
    vt1.push_back(s.vt1);
    li0.push_back(std::log10(s.i0));
    li1.push_back(std::log10(s.i1));
  }
  rep.tables.push_back(std::move(t));

  Table h{"mc_histogram", {"quantity", "bin_lo", "bin_hi", "count"}, {}};
  auto range = [](const std::vector<double>& a, const std::vector<double>& b) {
    double lo = std::min(*std::min_element(a.begin(), a.end()),
                         *std::min_element(b.begin(), b.end()));
    double hi = std::max(*std::max_element(a.begin(), a.end()),
                         *std::max_element(b.begin(), b.end()));
    return std::pair{lo, hi};
  };
  const auto [vlo, vhi] = range(vt0, vt1);
  const auto [ilo, ihi] = range(li0, li1);
  add_histogram(h, "vt0_volts", vt0, vlo, vhi, config.histogram_bins);
  add_histogram(h, "vt1_volts", vt1, vlo, vhi, config.histogram_bins);
  add_histogram(h, "log10_i_read0", li0, ilo, ihi, config.histogram_bins);
  add_histogram(h, "log10_i_read1", li1, ilo, ihi, config.histogram_bins);
  rep.tables.push_back(std::move(h));

  const double on_off = min_i1 / max_i0;
  rep.metric("leak0_added", leak0);
  rep.metric("leak1_added", leak1);
  rep.metric("min_i_read1", min_i1);
  rep.metric("max_i_read0", max_i0);
  rep.metric("min_on_off", on_off);
  rep.metric("min_pairwise_on_off", min_pair);
  rep.check("no_band_overlap", min_i1 > max_i0);
  rep.check("min_on_off_ge_10", on_off >= 10.0, fmt(on_off));
  return rep;
}

// ---------------------------------------------------------------------------

double cell_gate_capacitance(const Technology& tech) {
  return tech.fet.eps_fe * kEps0 * tech.ferro.area / tech.ferro.t_fe;
}

ExperimentReport power_sweep(const Technology& tech, const PowerSweepOptions& options) {
  const std::vector<int> sizes = options.sizes.empty() ? powers_of_two(2, 32) : options.sizes;
  ExperimentReport rep;
  rep.id = "power";
  std::string in = rep.id + "\n" + describe(tech);
  for (int s : sizes) in += fmt(s) + ",";
  rep.digest = digest_of(in);

  const FeFetState c1 = tech.written_cell(true);
  const double vsl = tech.bias.vsl;
  const double c_gate = cell_gate_capacitance(tech);
  struct Point {
    double i_sel, p_sl, p_wl, p_leak, p_total;
  };
  std::vector<Point> pts(sizes.size());
  parallel_for(static_cast<int>(sizes.size()), options.threads, [&](int k) {
    const int s = sizes[static_cast<size_t>(k)];
    const ArrayConfig cfg = tech.array(Topology::kCand, s, s);
    const ArrayState state = ArrayState::uniform(cfg, tech, c1);
    const ReadResult r = read_cell(state, 0, 0);
    Point& p = pts[static_cast<size_t>(k)];
    p.i_sel = r.cell(0, 0);
    p.p_sl = p.i_sel * vsl;
    p.p_wl = wordline_power(cfg, c_gate, tech.bias.vwl, tech.bias.t_pulse);
    p.p_leak = (r.supply_current - p.i_sel) * vsl;
    p.p_total = p.p_sl + p.p_wl + p.p_leak;
  });

  Table t{"power",
          {"rows", "i_sel_amps", "p_sl_watts", "p_wl_watts", "p_leak_watts", "p_total_watts"},
          {}};
  Table w{"power_word",
          {"rows", "n_bits", "i_sl_amps", "p_sl_watts", "p_bit_watts", "p_word_watts"},
          {}};
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, max_share = 0.0;
  for (size_t k = 0; k < sizes.size(); ++k) {
    const Point& p = pts[k];
    t.add({fmt(sizes[k]), fmt(p.i_sel), fmt(p.p_sl), fmt(p.p_wl), fmt(p.p_leak),
           fmt(p.p_total)});
    PowerModel pm;
    pm.n1 = sizes[k];
    pm.i_high = p.i_sel;
    pm.v_sl = vsl;
    pm.p_wl = p.p_wl;
    pm.p_leak = std::max(p.p_leak, 0.0);
    const PowerBreakdown b = read_current_and_power(pm);
    w.add({fmt(sizes[k]), fmt(sizes[k]), fmt(b.i_sl), fmt(b.p_sl), fmt(b.p_bit),
           fmt(b.p_word)});
    lo = std::min(lo, p.p_total);
    hi = std::max(hi, p.p_total);
    max_share = std::max(max_share, p.p_leak / p.p_total);
  }
  rep.tables.push_back(std::move(t));
  rep.tables.push_back(std::move(w));
  rep.metric("p_total_min", lo);
  rep.metric("p_total_max", hi);
  rep.metric("max_leak_share", max_share);
  rep.check("peak_power_flat_within_20pct", hi <= 1.2 * lo, fmt(hi / lo));
  rep.check("leak_share_lt_10pct", max_share < 0.1, fmt(max_share));
  for (size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] != 2) continue;
    const double expected =
        drain_current(tech.bias.vwl, vsl, c1.vt, tech.fet) * vsl + pts[k].p_wl;
    rep.check("size2_matches_single_cell",
              std::abs(pts[k].p_total - expected) <= 0.01 * expected,
              fmt(pts[k].p_total) + " vs " + fmt(expected));
  }
  return rep;
}

// ---------------------------------------------------------------------------

ExperimentReport accumulative_disturb_sweep(const Technology& tech,
                                            const AccumulativeOptions& options) {
  if (options.max_pulses < 1) throw std::invalid_argument("accumulative: max_pulses < 1");
  ExperimentReport rep;
  rep.id = "accumulative-disturb";
  rep.digest = digest_of(rep.id + "\n" + describe(tech) + fmt(options.max_pulses) +
                         fmt(options.pulse_width));

  struct Case {
    const char* name;
    double v;
    bool initial;
  };
  const double third = std::abs(tech.bias.vw0) / 3.0;
  const Case cases[] = {
      {"null", 0.0, false},
      {"half_select_write1_on_0", tech.bias.vw1 / 2.0, false},
      {"third_select_pos_on_0", third, false},
      {"third_select_neg_on_1", -third, true},
      {"third_select_neg_on_0", -third, false},
  };
  constexpr int kCases = sizeof cases / sizeof cases[0];
  const ArrayConfig cfg = tech.array(Topology::kCand, 1, 1);
  std::vector<std::vector<double>> traces(kCases);
  parallel_for(kCases, options.threads, [&](int i) {
    const Case& c = cases[i];
    const ArrayState s = ArrayState::uniform(cfg, tech, tech.written_cell(c.initial));
    traces[static_cast<size_t>(i)] =
        accumulate_disturb(s, 0, 0, c.v, options.max_pulses, options.pulse_width);
  });

  std::vector<int> checkpoints{0};
  for (int dec = 1; dec <= options.max_pulses; dec *= 10)
    for (int m : {1, 2, 5})
      if (dec * m <= options.max_pulses) checkpoints.push_back(dec * m);
  if (checkpoints.back() != options.max_pulses) checkpoints.push_back(options.max_pulses);

  Table t{"accumulative_disturb", {"case", "v_disturb_volts", "initial", "pulses", "vt_volts"},
          {}};
  Table sum{"accumulative_summary",
            {"case", "v_disturb_volts", "initial", "vt_initial_volts", "vt_final_volts",
             "delta_vt_volts", "flip_pulse"},
            {}};
  bool null_ok = true, monotone = true, polarity = true;
  for (int i = 0; i < kCases; ++i) {
    const Case& c = cases[i];
    const auto& tr = traces[static_cast<size_t>(i)];
    for (int p : checkpoints)
      t.add({c.name, fmt(c.v), fmt(static_cast<int>(c.initial)), fmt(p),
             fmt(tr[static_cast<size_t>(p)])});
    int flip = -1;
    const bool start_bit = tr.front() < tech.bias.vwl;
    for (size_t p = 1; p < tr.size(); ++p) {
      if ((tr[p] < tech.bias.vwl) != start_bit) {
        flip = static_cast<int>(p);
        break;
      }
    }
    const double dvt = tr.back() - tr.front();
    sum.add({c.name, fmt(c.v), fmt(static_cast<int>(c.initial)), fmt(tr.front()),
             fmt(tr.back()), fmt(dvt), fmt(flip)});
    if (c.v == 0.0) {
      null_ok = null_ok && dvt == 0.0;
      continue;
    }
    // Positive gate stress programs (vt falls); negative stress erases.
    const double sign = c.v > 0.0 ? -1.0 : 1.0;
    for (size_t p = 1; p < tr.size(); ++p)
      monotone = monotone && sign * (tr[p] - tr[p - 1]) >= -1e-12;
    polarity = polarity && sign * dvt >= 0.0;
  }
  rep.tables.push_back(std::move(t));
  rep.tables.push_back(std::move(sum));
  rep.check("null_case_no_drift", null_ok);
  rep.check("drift_monotone", monotone);
  rep.check("drift_follows_polarity", polarity);
  return rep;
}

// ---------------------------------------------------------------------------

ExperimentReport area_report(double spacing) {
  ExperimentReport rep;
  rep.id = "area";
  rep.digest = digest_of(rep.id + fmt(spacing));
  Table t{"area", {"topology", "spacing_lambda", "area_no_spacing_l2", "area_with_spacing_l2"},
          {}};
  const AreaModel plain{spacing, false};
  const AreaModel spaced{spacing, true};
  const double and0 = cell_area(plain, Topology::kAnd);
  const double and1 = cell_area(spaced, Topology::kAnd);
  const double c0 = cell_area(plain, Topology::kCand);
  const double c1 = cell_area(spaced, Topology::kCand);
  t.add({"and", fmt(spacing), fmt(and0), fmt(and1)});
  t.add({"cand", fmt(spacing), fmt(c0), fmt(c1)});
  rep.tables.push_back(std::move(t));
  rep.metric("ratio_no_spacing", and0 / c0);
  rep.metric("ratio_with_spacing", and1 / c1);
  rep.check("and_larger_than_cand", and0 > c0 && and1 > c1);
  return rep;
}

}  // namespace fecand
