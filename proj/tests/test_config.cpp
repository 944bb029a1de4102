#include <cstdio>
#include <fstream>
#include <functional>
#include <string>

#include "doctest.h"
#include "fecand/config.hpp"

using namespace fecand;

namespace {

ConfigErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.code();
  }
  FAIL("expected ConfigError");
  return ConfigErrorCode::kParse;
}

}  // namespace

TEST_CASE("empty configuration resolves to the table defaults") {
  const RunConfig c = parse_config_text("");
  CHECK_NOTHROW(c.validate());
  CHECK(c.tech.ferro.ps == 0.2);
  CHECK(c.tech.ferro.pr == 0.19);
  CHECK(c.tech.ferro.coercive_voltage() == doctest::Approx(1.04));
  CHECK(c.tech.ferro.tau_eff == 1e-6);
  CHECK(c.tech.bias.vw0 == -1.5);
  CHECK(c.tech.bias.vw1 == 3.2);
  CHECK(c.tech.bias.vwl == 1.0);
  CHECK(c.tech.bias.vsl == 1.0);
  CHECK(c.tech.bias.t_pulse == 10e-6);
  CHECK(c.tech.fet.w == 500e-9);
  CHECK(c.tech.fet.l == 500e-9);
  CHECK(c.tech.parasitics.rm == 9.45);
  for (const auto& k : RunConfig::keys()) CHECK(c.source_of(k) == Source::kDefault);
}

TEST_CASE("remanence above saturation is rejected") {
  const RunConfig c = parse_config_text("pr = 0.25\n");
  CHECK(code_of([&] { c.validate(); }) == ConfigErrorCode::kOutOfRange);
}

TEST_CASE("flag beats file beats default") {
  RunConfig c = parse_config_text("# comment\nvw1 = 3.0\nseed = 7  # trailing\n");
  c.set("seed", "9", Source::kFlag);
  CHECK(c.tech.bias.vw1 == 3.0);
  CHECK(c.source_of("vw1") == Source::kFile);
  CHECK(c.seed == 9);
  CHECK(c.source_of("seed") == Source::kFlag);
  CHECK(c.source_of("vw0") == Source::kDefault);
}

TEST_CASE("error codes are distinct") {
  CHECK(code_of([] { parse_config_text("bogus = 1\n"); }) == ConfigErrorCode::kUnknownKey);
  CHECK(code_of([] { parse_config_text("vw1 = abc\n"); }) == ConfigErrorCode::kParse);
  CHECK(code_of([] { parse_config_text("vw1\n"); }) == ConfigErrorCode::kParse);
  CHECK(code_of([] { parse_config_text("vw1 = 1\nvw1 = 2\n"); }) == ConfigErrorCode::kParse);
  CHECK(code_of([] { parse_config("/nonexistent/fecand.cfg"); }) == ConfigErrorCode::kMissingFile);
  CHECK(code_of([] { parse_config_text("schema_version = 2\n").validate(); }) ==
        ConfigErrorCode::kSchemaVersion);
  CHECK(code_of([] { parse_config_text("rows = 0\n").validate(); }) ==
        ConfigErrorCode::kOutOfRange);
  CHECK(code_of([] { parse_config_text("topology = nor\n"); }) == ConfigErrorCode::kParse);
}

TEST_CASE("geometry keys keep the ferroelectric area in step") {
  const RunConfig c = parse_config_text("w = 400e-9\nl = 300e-9\n");
  CHECK(c.tech.ferro.area == doctest::Approx(400e-9 * 300e-9));
}

TEST_CASE("files round-trip through entries") {
  RunConfig c = parse_config_text("vw1 = 3.1\ntopology = and\nword = 0xA5\nwrite_order = ones_first\n");
  std::string text;
  for (const auto& [k, v] : c.entries()) text += k + " = " + v + "\n";
  const RunConfig d = parse_config_text(text);
  CHECK(d.canonical() == c.canonical());
  CHECK(d.word == 0xA5);
  CHECK(d.ones_first);
  CHECK(d.topology == Topology::kAnd);
}

TEST_CASE("canonical text ignores output-only keys") {
  RunConfig a = parse_config_text("");
  RunConfig b = parse_config_text("out = elsewhere\nthreads = 3\nplot = true\n");
  CHECK(a.canonical() == b.canonical());
  b.set("seed", "2", Source::kFlag);
  CHECK(a.canonical() != b.canonical());
}

TEST_CASE("configuration files load from disk") {
  const std::string path = "fecand_test_config.cfg";
  {
    std::ofstream f(path);
    f << "schema_version = 1\nsamples = 12\n";
  }
  const RunConfig c = parse_config(path);
  CHECK(c.samples == 12);
  CHECK(c.mc_config().samples == 12);
  std::remove(path.c_str());
}
