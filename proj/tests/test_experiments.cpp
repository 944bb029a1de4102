#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "fecand/experiments.hpp"

using namespace fecand;

namespace {

std::string csv_of(const ExperimentReport& r) {
  std::string s;
  for (const Table& t : r.tables) s += t.name + "\n" + t.to_csv();
  return s;
}

bool passed(const ExperimentReport& r, const std::string& name) {
  for (const Check& c : r.checks)
    if (c.name == name) return c.passed;
  FAIL("missing check " << name);
  return false;
}

}  // namespace

TEST_CASE("reports render byte-identical tables on rerun") {
  Technology t;
  CHECK(csv_of(device_sweep(t)) == csv_of(device_sweep(t)));
  CHECK(csv_of(area_report()) == csv_of(area_report()));
  LongBitlineOptions o;
  o.sizes = {2, 8, 64};
  const ExperimentReport a = long_bitline_sweep(t, o), b = long_bitline_sweep(t, o);
  CHECK(csv_of(a) == csv_of(b));
  CHECK(a.digest == b.digest);
  CHECK(a.table("long_bitline").header ==
        std::vector<std::string>{"rows", "topology", "i_read0_amps", "i_read1_amps",
                                 "window_ratio"});
}

TEST_CASE("digest follows the inputs") {
  Technology t;
  Technology u = t;
  u.bias.vw1 = 3.3;
  CHECK(device_sweep(t).digest != device_sweep(u).digest);
  CHECK(digest_of("") == "cbf29ce484222325");
  CHECK(digest_of("a") == "af63dc4c8601ec8c");
}

TEST_CASE("parallel_for covers every index once and rethrows") {
  std::vector<std::atomic<int>> hits(97);
  parallel_for(97, 4, [&](int i) { ++hits[static_cast<size_t>(i)]; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](int i) {
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("word write examples") {
  Technology t;
  WordWriteOptions o;
  o.words = {0x0F};
  const ExperimentReport a = word_write_demo(t, o);
  CHECK(a.table("word_write").rows.at(0).at(1) == "0x0F");
  CHECK(a.all_passed());

  o.words = {0x00, 0xFF};
  const ExperimentReport b = word_write_demo(t, o);
  const Table& tb = b.table("word_write");
  CHECK(tb.rows.at(0).at(1) == "0x00");
  CHECK(tb.rows.at(1).at(1) == "0xFF");
  for (const auto& row : tb.rows) CHECK(row.at(2) == "2");
  CHECK(b.all_passed());

  o.ones_first = true;
  o.words = {0xA5, 0x5A};
  CHECK(word_write_demo(t, o).all_passed());
}

TEST_CASE("sixteen sampled words read back") {
  Technology t;
  WordWriteOptions o;
  for (std::uint32_t w = 0; w < 256; w += 17) o.words.push_back(w);
  const ExperimentReport r = word_write_demo(t, o);
  CHECK(passed(r, "readback_matches_every_word"));
  CHECK(passed(r, "exactly_two_phases"));
}

TEST_CASE("disturb matrix agrees with direct engine reads") {
  Technology t;
  const ExperimentReport r = disturb_matrix(t, 16, 16);
  CHECK(r.all_passed());
  const Table& tab = r.table("disturb_matrix");
  REQUIRE(tab.rows.size() == 16);

  const ArrayConfig cfg = t.array(Topology::kCand, 16, 16);
  const ArrayState before = ArrayState::uniform(cfg, t, t.written_cell(false));
  const ArrayState after =
      apply_write(before, cand_write_bias(Operation::kWrite1, 0, std::vector<int>{0}, cfg, t.bias));
  const auto ib = tab.column("i_before_amps");
  const auto ia = tab.column("i_after_amps");
  int matched = 0;
  for (size_t k = 0; k < tab.rows.size(); ++k) {
    const auto& row = tab.rows[k];
    if (row[0] != "0" || row[1] != to_string(Operation::kWrite1)) continue;
    const int rr = std::stoi(row[3]), cc = std::stoi(row[4]);
    CHECK(std::abs(ib[k] - read_cell(before, rr, cc).current_at(cc)) < 1e-12);
    CHECK(std::abs(ia[k] - read_cell(after, rr, cc).current_at(cc)) < 1e-12);
    ++matched;
  }
  CHECK(matched == 4);
}

TEST_CASE("Monte Carlo with zero sigma is a point mass at the nominal run") {
  Technology t;
  McConfig c;
  c.samples = 6;
  c.sigma_vw0 = c.sigma_vw1 = c.sigma_wl = 0.0;
  c.leak_rows = c.leak_cols = 16;
  const ExperimentReport r = monte_carlo(t, c);
  const Table& s = r.table("mc_samples");
  const auto i0 = s.column("i_read0_amps");
  const auto i1 = s.column("i_read1_amps");

  const ArrayConfig cfg = t.array(Topology::kCand, 2, 2);
  const std::vector<int> sel{0};
  const ArrayState one = apply_write(ArrayState::uniform(cfg, t, t.erased_cell()),
                                     cand_write_bias(Operation::kWrite1, 0, sel, cfg, t.bias));
  const ArrayState zero = apply_write(ArrayState::uniform(cfg, t, t.programmed_cell()),
                                      cand_write_bias(Operation::kWrite0, 0, sel, cfg, t.bias));
  const double leak1 = column_readout_uniform(t, Topology::kCand, 16, 16, t.written_cell(true),
                                              t.written_cell(false)).i_leak;
  const double leak0 = column_readout_uniform(t, Topology::kCand, 16, 16, t.written_cell(false),
                                              t.written_cell(true)).i_leak;
  const double n1 = read_cell(one, 0, 0).current_at(0) + leak1;
  const double n0 = read_cell(zero, 0, 0).current_at(0) + leak0;
  for (double v : i1) CHECK(v == doctest::Approx(n1).epsilon(1e-8));
  for (double v : i0) CHECK(v == doctest::Approx(n0).epsilon(1e-8));
  for (double v : i1) CHECK(v == i1.front());

  long long nonzero_bins = 0;
  const Table& h = r.table("mc_histogram");
  const auto counts = h.column("count");
  for (size_t k = 0; k < counts.size(); ++k)
    if (h.rows[k][0] == "log10_i_read1" && counts[k] > 0) ++nonzero_bins;
  CHECK(nonzero_bins == 1);
}

TEST_CASE("Monte Carlo reruns are identical per seed") {
  Technology t;
  McConfig c;
  c.samples = 40;
  c.seed = 1234;
  c.leak_rows = c.leak_cols = 32;
  c.threads = 3;
  const ExperimentReport a = monte_carlo(t, c);
  c.threads = 1;
  const ExperimentReport b = monte_carlo(t, c);
  CHECK(csv_of(a) == csv_of(b));
  c.seed = 1235;
  CHECK(csv_of(monte_carlo(t, c)) != csv_of(a));
}

TEST_CASE("Monte Carlo draws stay positive") {
  Technology t;
  McConfig c;
  c.sigma_wl = 400e-9;
  for (int i = 0; i < 50; ++i) {
    const McSample s = monte_carlo_trial(t, c, i, 0.0, 0.0);
    CHECK(s.w > 0.0);
    CHECK(s.l > 0.0);
  }
  c.sigma_vw0 = -0.1;
  CHECK_THROWS_AS(monte_carlo(t, c), std::invalid_argument);
}

TEST_CASE("long bitline sweep properties") {
  Technology t;
  LongBitlineOptions o;
  o.sizes = {2, 4, 8, 16, 32, 64, 128};
  const ExperimentReport r = long_bitline_sweep(t, o);
  const Table& tab = r.table("long_bitline");
  const auto rows = tab.column("rows");
  const auto i0 = tab.column("i_read0_amps");
  const auto win = tab.column("window_ratio");
  double prev_and = 0.0, prev_win_and = INFINITY, prev_win_cand = INFINITY;
  for (size_t k = 0; k < tab.rows.size(); ++k) {
    if (tab.rows[k][1] == "and") {
      CHECK(i0[k] >= prev_and);
      CHECK(win[k] <= prev_win_and);
      prev_and = i0[k];
      prev_win_and = win[k];
    } else {
      CHECK(win[k] <= prev_win_cand);
      prev_win_cand = win[k];
    }
  }
  CHECK(rows.size() == 14);
  CHECK(passed(r, "size2_windows_within_10pct"));
}

TEST_CASE("power sweep is flat and leakage is minor") {
  Technology t;
  const ExperimentReport r = power_sweep(t);
  CHECK(r.all_passed());
  const Table& p = r.table("power");
  const auto total = p.column("p_total_watts");
  const auto leak = p.column("p_leak_watts");
  for (size_t k = 0; k < total.size(); ++k) CHECK(leak[k] < 0.1 * total[k]);
}

TEST_CASE("accumulative disturb sweep") {
  Technology t;
  AccumulativeOptions o;
  o.max_pulses = 500;
  const ExperimentReport r = accumulative_disturb_sweep(t, o);
  CHECK(r.all_passed());
}
