// Acceptance suite: one PASS/FAIL line per criterion.
//
// --expect-fail N marks criterion N as a known failure. The process exits 0
// only when the failing set equals the expected set, so a known failure that
// starts passing is reported too.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fecand/analytics.hpp"
#include "fecand/experiments.hpp"
#include "fecand/ferro.hpp"

using namespace fecand;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string failed_checks(const ExperimentReport& r) {
  std::string s;
  for (const Check& c : r.checks)
    if (!c.passed) s += (s.empty() ? "" : ", ") + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
  return s;
}

Outcome preisach_identities() {
  Outcome o;
  const FerroParams p;
  BranchState asc, desc;
  desc.direction = Direction::kDescending;
  const double p_neg = branch_polarization(asc, 0.0, p);
  const double p_pos = branch_polarization(desc, 0.0, p);
  o.require(std::abs(p_neg + p.pr) <= 1e-6 * p.pr, "ascending remanence " + num(p_neg));
  o.require(std::abs(p_pos - p.pr) <= 1e-6 * p.pr, "descending remanence " + num(p_pos));
  o.require(BranchState::negative_remanent(p).p == p_neg, "negative remanent state");
  o.require(BranchState::positive_remanent(p).p == p_pos, "positive remanent state");
  for (const BranchState* b : {&asc, &desc}) {
    o.require(branch_polarization(*b, 10 * p.ec, p) >= 0.999 * p.ps * (1 - 1e-6), "+10 Ec");
    o.require(branch_polarization(*b, -10 * p.ec, p) <= -0.999 * p.ps * (1 - 1e-6), "-10 Ec");
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> field(-4 * p.ec, 4 * p.ec);
  BranchState s = BranchState::negative_remanent(p);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    s.e_eff = field(rng);
    s.p = std::clamp(branch_polarization(s, s.e_eff, p), -p.ps, p.ps);
    const BranchState r = reverse_branch(s, p);
    worst = std::max(worst, std::abs(branch_polarization(r, r.e_eff, p) - s.p));
    s = r;
  }
  o.require(worst < 1e-12, "reversal jump " + num(worst));
  if (o.passed) o.detail = "max reversal jump " + num(worst) + " C/m^2";
  return o;
}

Outcome integrator() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> field(-5e8, 5e8), logt(-9.0, -3.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double e0 = field(rng), ext = field(rng);
    const double tau = std::pow(10.0, logt(rng)), dt = std::pow(10.0, logt(rng));
    const double expected = ext + (e0 - ext) * std::exp(-dt / tau);
    const double got = advance_field(e0, ext, dt, tau);
    worst = std::max(worst, std::abs(got - expected) / std::max(std::abs(expected), 1.0));
  }
  o.require(worst <= 1e-12, "relative error " + num(worst));
  if (o.passed) o.detail = "max relative error " + num(worst);
  return o;
}

Outcome scheme_golden() {
  Outcome o;
  const DisturbReport a = verify_scheme(-1.0, 4.5, WriteScheme::kVdd3);
  const DisturbEntry& ad = a.at(Operation::kWrite1, CellGroup::kDiagonal);
  o.require(ad.v_gb == -1.5 && ad.flag == DisturbFlag::kDisturb,
            "4.5 V diag " + num(ad.v_gb) + " " + to_string(ad.flag));
  const DisturbReport b = verify_scheme(-1.0, 2.1, WriteScheme::kVdd3);
  const DisturbEntry& bd = b.at(Operation::kWrite1, CellGroup::kDiagonal);
  // -0.7 is not representable; compare with the same operations the plan uses.
  const double expected = 2.1 / 3.0 - 2.0 * 2.1 / 3.0;
  o.require(bd.v_gb == expected && bd.flag == DisturbFlag::kPartialRisk,
            "2.1 V diag " + num(bd.v_gb) + " " + to_string(bd.flag));
  o.require(std::abs(bd.v_gb + 0.7) < 1e-15, "2.1 V diag value");
  const DisturbReport c = verify_scheme(-1.5, 3.2, WriteScheme::kMixed);
  o.require(c.all_pass(), "mixed scheme flags a group");
  o.require(c.at(Operation::kWrite1, CellGroup::kDiagonal).v_gb == 0.0, "mixed write1 diag");
  return o;
}

Outcome disturb() {
  Outcome o;
  const ExperimentReport r = disturb_matrix(Technology{}, 16, 16);
  o.require(r.all_passed(), failed_checks(r));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("band ratio ") +
              num(r.metric_value("band_ratio"));
  return o;
}

Outcome long_bitline() {
  Outcome o;
  const ExperimentReport r = long_bitline_sweep(Technology{});
  o.require(r.all_passed(), failed_checks(r));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("AND '0' at 2048 ") +
              num(r.metric_value("and_read0_2048")) + " A, C-AND '0' " +
              num(r.metric_value("cand_read0_2048")) + " A, C-AND on/off " +
              num(r.metric_value("cand_on_off_2048"));
  return o;
}

Outcome word_write() {
  Outcome o;
  const ExperimentReport r = word_write_demo(Technology{});
  o.require(r.metric_value("words") == 256, "word count");
  o.require(r.all_passed(), failed_checks(r));
  if (o.passed) o.detail = "256 words, 2 phases each";
  return o;
}

Outcome leakage_formula() {
  Outcome o;
  LeakModel l{100.0, 1e6, 1e6, 5, 5};
  o.require(r_eff(l) == 312525.0, "hand oracle " + num(r_eff(l)));
  l.m = l.n = 2;
  o.require(r_eff(l) == 100.0 + 2e6, "2x2 hand oracle");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int m = 2; m <= 8; ++m)
    for (int n = 2; n <= 8; ++n)
      for (double ratio : {1e2, 1e3, 1e4, 1e6}) {
        const LeakModel k{1e3, 1e3 * ratio, 1e3 * ratio, m, n};
        const double f = r_eff(k);
        o.require(f > r_eff_lower_bound(k), "bound at m=" + std::to_string(m));
        const double q = brute_force_network(k) / f;
        lo = std::min(lo, q);
        hi = std::max(hi, q);
      }
  o.require(lo > 0.5 && hi < 2.0, "oracle ratio range " + num(lo) + ".." + num(hi));
  if (o.passed) o.detail = "oracle/formula in [" + num(lo) + ", " + num(hi) + "]";
  return o;
}

Outcome power() {
  Outcome o;
  PowerModel m;
  m.n1 = 8;
  m.i_high = 400e-9;
  m.v_sl = 1.0;
  const double p = read_current_and_power(m).p_sl_max;
  o.require(std::abs(p - 3.2e-6) <= 1e-15 * 3.2e-6 * 8, "P_SL,max " + num(p));
  const ExperimentReport r = power_sweep(Technology{});
  o.require(r.all_passed(), failed_checks(r));
  if (o.passed) o.detail = "3.2 uW; sweep flat and leak-free";
  return o;
}

Outcome area() {
  Outcome o;
  auto round_to = [](double v, int d) {
    const double s = std::pow(10.0, d);
    return std::round(v * s) / s;
  };
  const AreaModel bare{kDefaultBulkSpacing, false}, spaced{kDefaultBulkSpacing, true};
  const double c0 = cell_area(bare, Topology::kCand), a0 = cell_area(bare, Topology::kAnd);
  const double c1 = cell_area(spaced, Topology::kCand), a1 = cell_area(spaced, Topology::kAnd);
  o.require(round_to(c0, 2) == 83.57 && round_to(a0, 2) == 244.14, "no-spacing areas");
  o.require(round_to(c1, 1) == 415.2 && round_to(a1, 2) == 801.54, "spaced areas");
  o.require(round_to(a0 / c0, 2) == 2.92 && round_to(a1 / c1, 2) == 1.93, "ratios");
  o.detail = num(a0) + "/" + num(c0) + " and " + num(a1) + "/" + num(c1) + " lambda^2";
  return o;
}

Outcome monte_carlo_check() {
  Outcome o;
  McConfig c;
  c.samples = 1000;
  c.seed = 1;
  const ExperimentReport a = monte_carlo(Technology{}, c);
  const ExperimentReport b = monte_carlo(Technology{}, c);
  o.require(a.all_passed(), failed_checks(a));
  bool same = a.tables.size() == b.tables.size();
  for (size_t i = 0; same && i < a.tables.size(); ++i)
    same = a.tables[i].to_csv() == b.tables[i].to_csv();
  o.require(same, "rerun differs");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("min on/off ") +
              num(a.metric_value("min_on_off"));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fecand acceptance suite"};
  std::vector<int> expect_fail;
  std::vector<int> only;
  app.add_option("--expect-fail", expect_fail, "criterion documented as failing")
      ->check(CLI::Range(1, 10));
  app.add_option("--only", only, "run a subset")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "Preisach identities", 10, preisach_identities},
      {2, "field integrator exactness", 1, integrator},
      {3, "scheme audit golden cases", 1, scheme_golden},
      {4, "16x16 disturb matrix", 120, disturb},
      {5, "long-bitline sweep at 2048 rows", 120, long_bitline},
      {6, "two-cycle write of all 256 words", 300, word_write},
      {7, "leakage formula and oracle", 10, leakage_formula},
      {8, "read power", 60, power},
      {9, "cell area table", 1, area},
      {10, "Monte Carlo separation", 300, monte_carlo_check},
  };

  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  std::set<int> failed;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.passed = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > c.budget_s) out.require(false, "runtime " + num(dt) + " s over " + num(c.budget_s) + " s");
    if (!out.passed) failed.insert(c.id);
    std::printf("[%s] %2d %s (%.2f s)%s%s%s\n", out.passed ? "PASS" : "FAIL", c.id, c.name, dt,
                out.detail.empty() ? "" : ": ", out.detail.c_str(),
                !out.passed && expected.count(c.id) ? " [known failure]" : "");
    std::fflush(stdout);
  }

  int status = 0;
  for (int id : failed)
    if (!expected.count(id)) status = 1;
  for (int id : expected) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    if (!failed.count(id)) {
      std::printf("criterion %d was expected to fail but passed\n", id);
      status = 1;
    }
  }
  std::printf("%zu of %zu criteria passed\n",
              (only.empty() ? criteria.size() : only.size()) - failed.size(),
              only.empty() ? criteria.size() : only.size());
  return status;
}
