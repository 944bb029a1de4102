#include "fecand/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace fecand {

const char* to_string(Source s) {
  switch (s) {
    case Source::kDefault: return "default";
    case Source::kFile: return "file";
    case Source::kFlag: return "flag";
  }
  return "?";
}

namespace {

[[noreturn]] void parse_error(const std::string& key, const std::string& value,
                              const char* what) {
  throw ConfigError(ConfigErrorCode::kParse,
                    "config: cannot parse " + key + " = '" + value + "' as " + what);
}

double to_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(d))
    parse_error(key, v, "a finite number");
  return d;
}

long long to_int(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long i = std::strtoll(v.c_str(), &end, 0);
  if (v.empty() || *end != '\0' || errno == ERANGE) parse_error(key, v, "an integer");
  if (i < -2147483647LL || i > 2147483647LL) parse_error(key, v, "a 32-bit integer");
  return i;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  if (!v.empty() && v[0] == '-') parse_error(key, v, "an unsigned integer");
  const unsigned long long u = std::strtoull(v.c_str(), &end, 0);
  if (v.empty() || *end != '\0' || errno == ERANGE) parse_error(key, v, "an unsigned integer");
  return u;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  parse_error(key, v, "a boolean");
}

struct Field {
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define FECAND_DOUBLE(name, expr)                                                        \
  Field {                                                                                \
    name, [](RunConfig& c, const std::string& v) { c.expr = to_double(name, v); },       \
        [](const RunConfig& c) { return fmt(c.expr); }                                  \
  }
#define FECAND_INT(name, expr)                                                           \
  Field {                                                                                \
    name, [](RunConfig& c, const std::string& v) {                                       \
      c.expr = static_cast<int>(to_int(name, v));                                        \
    },                                                                                   \
        [](const RunConfig& c) { return fmt(c.expr); }                                  \
  }
#define FECAND_BOOL(name, expr)                                                          \
  Field {                                                                                \
    name, [](RunConfig& c, const std::string& v) { c.expr = to_bool(name, v); },         \
        [](const RunConfig& c) { return std::string(c.expr ? "true" : "false"); }       \
  }

const std::vector<Field>& field_table() {
  static const std::vector<Field> table = {
      FECAND_INT("schema_version", schema_version),
      // ferroelectric
      FECAND_DOUBLE("ps", tech.ferro.ps),
      FECAND_DOUBLE("pr", tech.ferro.pr),
      FECAND_DOUBLE("ec", tech.ferro.ec),
      FECAND_DOUBLE("t_fe", tech.ferro.t_fe),
      FECAND_DOUBLE("tau_eff", tech.ferro.tau_eff),
      // transistor; the ferroelectric area follows W*L
      Field{"w",
            [](RunConfig& c, const std::string& v) {
              c.tech.fet.w = to_double("w", v);
              c.tech.ferro.area = c.tech.fet.w * c.tech.fet.l;
            },
            [](const RunConfig& c) { return fmt(c.tech.fet.w); }},
      Field{"l",
            [](RunConfig& c, const std::string& v) {
              c.tech.fet.l = to_double("l", v);
              c.tech.ferro.area = c.tech.fet.w * c.tech.fet.l;
            },
            [](const RunConfig& c) { return fmt(c.tech.fet.l); }},
      FECAND_DOUBLE("vt_mid", tech.fet.vt_mid),
      FECAND_DOUBLE("mw", tech.fet.mw),
      FECAND_DOUBLE("s", tech.fet.s),
      FECAND_DOUBLE("i_spec", tech.fet.i_spec),
      FECAND_DOUBLE("n_slope", tech.fet.n_slope),
      FECAND_DOUBLE("g_min", tech.fet.g_min),
      Field{"gate_mode",
            [](RunConfig& c, const std::string& v) {
              try {
                c.tech.fet.gate_mode = gate_mode_from_string(v.c_str());
              } catch (const std::exception&) {
                parse_error("gate_mode", v, "direct|divider|depletion");
              }
            },
            [](const RunConfig& c) { return std::string(to_string(c.tech.fet.gate_mode)); }},
      FECAND_DOUBLE("c_il", tech.fet.c_il),
      FECAND_DOUBLE("eps_fe", tech.fet.eps_fe),
      FECAND_DOUBLE("v_depletion", tech.fet.v_depletion),
      FECAND_DOUBLE("depletion_width", tech.fet.depletion_width),
      // bias
      FECAND_DOUBLE("vw0", tech.bias.vw0),
      FECAND_DOUBLE("vw1", tech.bias.vw1),
      FECAND_DOUBLE("vwl", tech.bias.vwl),
      FECAND_DOUBLE("vsl", tech.bias.vsl),
      FECAND_DOUBLE("t_pulse", tech.bias.t_pulse),
      FECAND_DOUBLE("settle", tech.settle),
      // array
      FECAND_INT("rows", rows),
      FECAND_INT("cols", cols),
      Field{"topology",
            [](RunConfig& c, const std::string& v) {
              try {
                c.topology = topology_from_string(v);
              } catch (const std::exception&) {
                parse_error("topology", v, "and|cand");
              }
            },
            [](const RunConfig& c) { return std::string(to_string(c.topology)); }},
      FECAND_DOUBLE("rm", tech.parasitics.rm),
      FECAND_DOUBLE("cm", tech.parasitics.cm),
      FECAND_DOUBLE("rp", tech.parasitics.rp),
      FECAND_DOUBLE("cp", tech.parasitics.cp),
      FECAND_DOUBLE("lambda", tech.lambda),
      FECAND_DOUBLE("spacing", tech.bulk_spacing),
      // experiments
      Field{"seed", [](RunConfig& c, const std::string& v) { c.seed = to_u64("seed", v); },
            [](const RunConfig& c) { return std::to_string(c.seed); }},
      FECAND_INT("samples", samples),
      FECAND_DOUBLE("sigma_vw0", mc.sigma_vw0),
      FECAND_DOUBLE("sigma_vw1", mc.sigma_vw1),
      FECAND_DOUBLE("sigma_wl", mc.sigma_wl),
      FECAND_BOOL("shared_wl", mc.shared_wl),
      FECAND_INT("leak_rows", mc.leak_rows),
      FECAND_INT("leak_cols", mc.leak_cols),
      FECAND_INT("histogram_bins", mc.histogram_bins),
      FECAND_INT("threads", threads),
      Field{"out", [](RunConfig& c, const std::string& v) { c.out = v; },
            [](const RunConfig& c) { return c.out; }},
      Field{"word",
            [](RunConfig& c, const std::string& v) {
              const std::uint64_t w = to_u64("word", v);
              if (w > 0x7fffffffu) parse_error("word", v, "a 31-bit word");
              c.word = static_cast<std::uint32_t>(w);
            },
            [](const RunConfig& c) { return std::to_string(c.word); }},
      Field{"write_order",
            [](RunConfig& c, const std::string& v) {
              if (v == "zeros_first")
                c.ones_first = false;
              else if (v == "ones_first")
                c.ones_first = true;
              else
                parse_error("write_order", v, "zeros_first|ones_first");
            },
            [](const RunConfig& c) {
              return std::string(c.ones_first ? "ones_first" : "zeros_first");
            }},
      FECAND_INT("max_pulses", max_pulses),
      FECAND_BOOL("plot", plot),
  };
  return table;
}

#undef FECAND_DOUBLE
#undef FECAND_INT
#undef FECAND_BOOL

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> out;
    for (const auto& f : field_table()) out.emplace_back(f.key);
    return out;
  }();
  return k;
}

void RunConfig::set(const std::string& key, const std::string& value, Source source) {
  for (const auto& f : field_table()) {
    if (key == f.key) {
      f.set(*this, value);
      provenance[key] = source;
      return;
    }
  }
  throw ConfigError(ConfigErrorCode::kUnknownKey, "config: unknown key '" + key + "'");
}

Source RunConfig::source_of(const std::string& key) const {
  const auto it = provenance.find(key);
  return it == provenance.end() ? Source::kDefault : it->second;
}

void RunConfig::validate() const {
  auto bad = [](const std::string& what) {
    throw ConfigError(ConfigErrorCode::kOutOfRange, "config: " + what);
  };
  if (schema_version != kSchemaVersion)
    throw ConfigError(ConfigErrorCode::kSchemaVersion,
                      "config: unsupported schema_version " + std::to_string(schema_version) +
                          " (expected " + std::to_string(kSchemaVersion) + ")");
  try {
    tech.validate();
    mc_config().validate();
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }
  if (rows < 1 || cols < 1) bad("rows and cols must be >= 1");
  if (threads < 0) bad("threads must be >= 0");
  if (max_pulses < 1) bad("max_pulses must be >= 1");
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : field_table()) out.emplace_back(f.key, f.get(*this));
  return out;
}

McConfig RunConfig::mc_config() const {
  McConfig m = mc;
  m.samples = samples;
  m.seed = seed;
  m.threads = threads;
  return m;
}

std::string RunConfig::canonical() const {
  std::string s;
  for (const auto& [k, v] : entries()) {
    if (k == "out" || k == "threads" || k == "plot") continue;  // no effect on results
    s += k + "=" + v + "\n";
  }
  return s;
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ConfigErrorCode::kParse,
                        "config: line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (seen.count(key))
      throw ConfigError(ConfigErrorCode::kParse,
                        "config: line " + std::to_string(lineno) + ": duplicate key '" + key +
                            "' (first on line " + std::to_string(seen[key]) + ")");
    seen[key] = lineno;
    base.set(key, value, Source::kFile);
  }
  return base;
}

RunConfig parse_config(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f)
    throw ConfigError(ConfigErrorCode::kMissingFile, "config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

}  // namespace fecand
