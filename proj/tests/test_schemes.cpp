#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fecand/schemes.hpp"

using namespace fecand;

namespace {

ArrayConfig cand(int m, int n) { return ArrayConfig::make(Topology::kCand, m, n); }
ArrayConfig and_(int m, int n) { return ArrayConfig::make(Topology::kAnd, m, n); }

double volts(const BiasPlan& p, LineKind k, int i) {
  const Drive& d = p.of(k).at(static_cast<size_t>(i));
  REQUIRE_FALSE(d.high_z);
  return d.volts;
}

std::vector<int> all_cols(int n) {
  std::vector<int> c(static_cast<size_t>(n));
  std::iota(c.begin(), c.end(), 0);
  return c;
}

void check_totality(const BiasPlan& p) {
  for (LineKind k : {LineKind::kWordLine, LineKind::kSelectLine, LineKind::kBitLine,
                     LineKind::kBulkLine}) {
    CHECK(static_cast<int>(p.of(k).size()) ==
          BiasPlan::line_count(p.topology, k, p.rows, p.cols));
  }
  CHECK_NOTHROW(p.validate());
}

}  // namespace

TEST_CASE("C-AND write0 plan at -1.5 V") {
  const ArrayConfig cfg = cand(4, 4);
  const BiasVoltages v;
  const std::vector<int> cols{1};
  const BiasPlan p = cand_write_bias(Operation::kWrite0, 2, cols, cfg, v);
  CHECK(volts(p, LineKind::kWordLine, 2) == doctest::Approx(-1.5));
  CHECK(volts(p, LineKind::kWordLine, 0) == doctest::Approx(-0.5));
  CHECK(volts(p, LineKind::kBulkLine, 1) == 0.0);
  CHECK(volts(p, LineKind::kBulkLine, 3) == doctest::Approx(-1.0));
  for (int i = 0; i < 4; ++i) {
    CHECK(volts(p, LineKind::kSelectLine, i) == 0.0);
    CHECK(volts(p, LineKind::kBitLine, i) == 0.0);
  }
  check_totality(p);
}

TEST_CASE("C-AND write1 plan at 3.2 V") {
  const ArrayConfig cfg = cand(4, 4);
  const BiasVoltages v;
  const std::vector<int> cols{2};
  const BiasPlan p = cand_write_bias(Operation::kWrite1, 1, cols, cfg, v);
  CHECK(volts(p, LineKind::kWordLine, 1) == doctest::Approx(1.6));
  CHECK(volts(p, LineKind::kBulkLine, 2) == doctest::Approx(-1.6));
  for (int i = 0; i < 4; ++i) {
    if (i != 1) CHECK(volts(p, LineKind::kWordLine, i) == 0.0);
    if (i != 2) CHECK(volts(p, LineKind::kBulkLine, i) == 0.0);
    CHECK(volts(p, LineKind::kSelectLine, i) == 0.0);
    CHECK(volts(p, LineKind::kBitLine, i) == 0.0);
  }
}

TEST_CASE("whole-row erase grounds every bulk line") {
  const ArrayConfig cfg = cand(3, 5);
  const auto cols = all_cols(5);
  const BiasPlan p = cand_write_bias(Operation::kWrite0, 0, cols, cfg, BiasVoltages{});
  for (int j = 0; j < 5; ++j) CHECK(volts(p, LineKind::kBulkLine, j) == 0.0);
  for (int j = 0; j < 5; ++j) CHECK(cell_write_voltage(p, 0, j) == doctest::Approx(-1.5));
}

TEST_CASE("empty column set is rejected") {
  const std::vector<int> none;
  CHECK_THROWS_AS(cand_write_bias(Operation::kWrite1, 0, none, cand(2, 2), BiasVoltages{}),
                  std::invalid_argument);
}

TEST_CASE("C-AND read plan") {
  const ArrayConfig cfg = cand(4, 6);
  const BiasVoltages v;
  const std::vector<int> one{3};
  const BiasPlan p = cand_read_bias(2, one, cfg, v);
  CHECK(volts(p, LineKind::kWordLine, 2) == 1.0);
  CHECK(volts(p, LineKind::kSelectLine, 2) == 1.0);
  // selected cell: Vds = SL - BL = 1, Vgb = WL - BuL = 1
  CHECK(volts(p, LineKind::kSelectLine, 2) - volts(p, LineKind::kBitLine, 3) == 1.0);
  CHECK(volts(p, LineKind::kWordLine, 2) - volts(p, LineKind::kBulkLine, 3) == 1.0);
  int grounded = 0, floating = 0;
  for (const Drive& d : p.of(LineKind::kBitLine)) {
    if (d.high_z) ++floating;
    else if (d.volts == 0.0) ++grounded;
  }
  CHECK(grounded == 1);
  CHECK(floating == 5);
  for (int i = 0; i < 4; ++i) {
    if (i == 2) continue;
    CHECK(volts(p, LineKind::kWordLine, i) == 0.0);
    CHECK(p.of(LineKind::kSelectLine)[static_cast<size_t>(i)].high_z);
  }
  for (int j = 0; j < 6; ++j) CHECK(volts(p, LineKind::kBulkLine, j) == 0.0);
  check_totality(p);

  const auto every = all_cols(6);
  const BiasPlan word = cand_read_bias(0, every, cfg, v);
  for (const Drive& d : word.of(LineKind::kBitLine)) CHECK(d == Drive::at(0.0));
}

TEST_CASE("AND V_DD/3 write voltages per group") {
  const ArrayConfig cfg = and_(4, 4);
  const double vw = 4.5;
  const BiasPlan p = and_write_bias(Operation::kWrite1, 1, 2, vw, cfg, 10e-6);
  CHECK(cell_write_voltage(p, 1, 2) == doctest::Approx(vw));
  CHECK(cell_write_voltage(p, 0, 0) == doctest::Approx(-vw / 3));
  CHECK(cell_write_voltage(p, 1, 0) == doctest::Approx(vw / 3));
  CHECK(cell_write_voltage(p, 3, 2) == doctest::Approx(vw / 3));
  CHECK(volts(p, LineKind::kWordLine, 0) == doctest::Approx(1.5));
  CHECK(volts(p, LineKind::kBitLine, 0) == doctest::Approx(3.0));
  CHECK(volts(p, LineKind::kSelectLine, 0) == doctest::Approx(3.0));
  CHECK(volts(p, LineKind::kBitLine, 2) == 0.0);
  check_totality(p);
}

TEST_CASE("AND read plan drives the selected column only") {
  const ArrayConfig cfg = and_(4, 3);
  const BiasPlan p = and_read_bias(2, 1, cfg, BiasVoltages{});
  CHECK(volts(p, LineKind::kWordLine, 2) == 1.0);
  for (int i : {0, 1, 3}) CHECK(volts(p, LineKind::kWordLine, i) == 0.0);
  // same-column unselected cells: Vgs = 0 but Vds = 1
  CHECK(volts(p, LineKind::kBitLine, 1) - volts(p, LineKind::kSelectLine, 1) == 1.0);
  // other columns carry no drain drive
  for (int j : {0, 2}) {
    const Drive& bl = p.of(LineKind::kBitLine)[static_cast<size_t>(j)];
    const Drive& sl = p.of(LineKind::kSelectLine)[static_cast<size_t>(j)];
    CHECK((bl.high_z || bl.volts == sl.volts));
  }
  check_totality(p);
}

TEST_CASE("cell_write_voltage examples") {
  const BiasVoltages v;
  const std::vector<int> cols{0};
  const BiasPlan w1 = cand_write_bias(Operation::kWrite1, 0, cols, cand(3, 3), v);
  CHECK(cell_write_voltage(w1, 2, 2) == 0.0);
  const BiasPlan w0 = cand_write_bias(Operation::kWrite0, 0, cols, cand(3, 3), v);
  CHECK(cell_write_voltage(w0, 2, 2) == doctest::Approx(0.5));
  const BiasPlan a = and_write_bias(Operation::kWrite1, 0, 0, 4.5, and_(3, 3), 10e-6);
  CHECK(cell_write_voltage(a, 2, 2) == doctest::Approx(-1.5));
}

TEST_CASE("floating gate line in a write plan is rejected") {
  const std::vector<int> cols{0};
  BiasPlan p = cand_write_bias(Operation::kWrite1, 0, cols, cand(2, 2), BiasVoltages{});
  p.of(LineKind::kWordLine)[1] = Drive::hz();
  CHECK_THROWS(cell_write_voltage(p, 1, 1));
  const BiasPlan r = cand_read_bias(0, cols, cand(2, 2), BiasVoltages{});
  CHECK_THROWS(cell_write_voltage(r, 0, 0));
}

TEST_CASE("classification covers the four groups") {
  const std::vector<int> cols{1, 3};
  CHECK(classify(2, 1, 2, cols) == CellGroup::kSelected);
  CHECK(classify(2, 0, 2, cols) == CellGroup::kSameRow);
  CHECK(classify(0, 3, 2, cols) == CellGroup::kSameCol);
  CHECK(classify(0, 0, 2, cols) == CellGroup::kDiagonal);
}

TEST_CASE("verify_scheme: V_DD/3 at 4.5 V / -1 V disturbs the diagonal") {
  const DisturbReport r = verify_scheme(-1.0, 4.5, WriteScheme::kVdd3);
  const DisturbEntry& e = r.at(Operation::kWrite1, CellGroup::kDiagonal);
  CHECK(e.v_gb == doctest::Approx(-1.5));
  CHECK(e.flag == DisturbFlag::kDisturb);
  CHECK(r.any_disturb());
}

TEST_CASE("verify_scheme: V_DD/3 at 2.1 V / -1 V is a partial risk") {
  const DisturbReport r = verify_scheme(-1.0, 2.1, WriteScheme::kVdd3);
  const DisturbEntry& e = r.at(Operation::kWrite1, CellGroup::kDiagonal);
  CHECK(e.v_gb == doctest::Approx(-0.7));
  CHECK(e.flag == DisturbFlag::kPartialRisk);
  CHECK_FALSE(r.any_disturb());
}

TEST_CASE("verify_scheme: mixed scheme at table voltages passes") {
  const DisturbReport r = verify_scheme(-1.5, 3.2, WriteScheme::kMixed);
  CHECK(r.all_pass());
  CHECK(r.at(Operation::kWrite1, CellGroup::kSameRow).v_gb == doctest::Approx(1.6));
  CHECK(r.at(Operation::kWrite1, CellGroup::kDiagonal).v_gb == doctest::Approx(0.0));
  CHECK(std::abs(r.at(Operation::kWrite0, CellGroup::kSameRow).v_gb) == doctest::Approx(0.5));
  CHECK(std::abs(r.at(Operation::kWrite0, CellGroup::kDiagonal).v_gb) == doctest::Approx(0.5));
  CHECK(r.at(Operation::kWrite0, CellGroup::kSelected).v_gb == doctest::Approx(-1.5));
  CHECK(r.at(Operation::kWrite1, CellGroup::kSelected).v_gb == doctest::Approx(3.2));
}

TEST_CASE("property: plans are total for random selections") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 9), n = 1 + static_cast<int>(rng() % 9);
    const int row = static_cast<int>(rng() % static_cast<unsigned>(m));
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (rng() % 2) cols.push_back(j);
    if (cols.empty()) cols.push_back(static_cast<int>(rng() % static_cast<unsigned>(n)));
    const ArrayConfig c = cand(m, n);
    check_totality(cand_write_bias(Operation::kWrite0, row, cols, c, BiasVoltages{}));
    check_totality(cand_write_bias(Operation::kWrite1, row, cols, c, BiasVoltages{}));
    check_totality(cand_read_bias(row, cols, c, BiasVoltages{}));
    const ArrayConfig a = and_(m, n);
    check_totality(and_write_bias(Operation::kWrite1, row, cols[0], 4.5, a, 1e-5));
    check_totality(and_read_bias(row, cols[0], a, BiasVoltages{}));
  }
}

TEST_CASE("property: C-AND write voltages over random arrays") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u0(-3.0, -0.2), u1(0.2, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    BiasVoltages v;
    v.vw0 = u0(rng);
    v.vw1 = u1(rng);
    const int m = 2 + static_cast<int>(rng() % 7), n = 2 + static_cast<int>(rng() % 7);
    const int row = static_cast<int>(rng() % static_cast<unsigned>(m));
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (rng() % 2) cols.push_back(j);
    if (cols.empty()) cols.push_back(0);
    const ArrayConfig c = cand(m, n);
    const BiasPlan w0 = cand_write_bias(Operation::kWrite0, row, cols, c, v);
    const BiasPlan w1 = cand_write_bias(Operation::kWrite1, row, cols, c, v);
    for (const BiasPlan* p : {&w0, &w1})
      for (LineKind k : {LineKind::kSelectLine, LineKind::kBitLine})
        for (const Drive& d : p->of(k)) CHECK(d == Drive::at(0.0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        const bool sel = i == row && std::find(cols.begin(), cols.end(), j) != cols.end();
        const double g1 = cell_write_voltage(w1, i, j);
        const double g0 = cell_write_voltage(w0, i, j);
        CHECK(g1 >= 0.0);
        if (sel) {
          CHECK(g1 == v.vw1);
          CHECK(g0 == v.vw0);
        } else {
          CHECK(std::abs(g0) == doctest::Approx(std::abs(v.vw0) / 3).epsilon(1e-12));
        }
      }
  }
}

TEST_CASE("property: mixed scheme passes inside the safe region") {
  for (double vw1 = 0.5; vw1 <= 6.0; vw1 += 0.25)
    for (double vw0 = -0.5; vw0 >= -6.0; vw0 -= 0.25) {
      const DisturbThresholds t{-vw0, vw1};
      if (!(vw1 / 2 < t.write1 && -vw0 / 3 < std::min(t.write0, t.write1))) continue;
      const DisturbReport r = verify_scheme(vw0, vw1, WriteScheme::kMixed, t);
      CHECK_FALSE(r.any_disturb());
      for (const DisturbEntry& e : r.entries)
        if (e.group == CellGroup::kSelected)
          CHECK(std::abs(e.v_gb) == doctest::Approx(e.op == Operation::kWrite0 ? -vw0 : vw1));
    }
}
