// fecand: command-line front end for the FeFET array simulator.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fecand/config.hpp"
#include "fecand/error.hpp"
#include "fecand/experiments.hpp"
#include "fecand/output.hpp"
#include "json.hpp"

using namespace fecand;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kExitChecksFailed = 1;
constexpr int kExitSolver = 7;
constexpr int kExitOther = 8;

struct Flags {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::string> seed, out, samples, rows, cols, topology, threads;
  bool plot = false;
  std::vector<std::string> argv;
};

RunConfig resolve(const Flags& f) {
  RunConfig c;
  if (const char* env = std::getenv("FECAND_OUT")) c.out = env;
  if (!f.config_path.empty()) c = parse_config(f.config_path, c);
  auto flag = [&](const char* key, const std::optional<std::string>& v) {
    if (v) c.set(key, *v, Source::kFlag);
  };
  flag("seed", f.seed);
  flag("out", f.out);
  flag("samples", f.samples);
  flag("rows", f.rows);
  flag("cols", f.cols);
  flag("topology", f.topology);
  flag("threads", f.threads);
  if (f.plot) c.set("plot", "true", Source::kFlag);
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ConfigErrorCode::kParse, "--set expects key=value, got '" + kv + "'");
    c.set(kv.substr(0, eq), kv.substr(eq + 1), Source::kFlag);
  }
  c.validate();
  return c;
}

class Session {
 public:
  Session(const RunConfig& config, const Flags& flags, std::string command)
      : config_(config), flags_(flags), command_(std::move(command)) {}

  // Writes a report under <out>/<subdir> and records it in the manifest.
  void emit(const ExperimentReport& r, const std::string& subdir,
            std::vector<ChartSpec> charts = {}) {
    if (!config_.plot) charts.clear();
    const std::string dir = config_.out + "/" + subdir;
    const auto files = write_report(r, dir, charts);
    nlohmann::ordered_json entry;
    entry["experiment"] = r.id;
    entry["digest"] = r.digest;
    entry["passed"] = r.all_passed();
    entry["files"] = nlohmann::ordered_json::array();
    for (const auto& f : files) entry["files"].push_back(subdir + "/" + f);
    reports_.push_back(entry);
    if (std::find(subdirs_.begin(), subdirs_.end(), subdir) == subdirs_.end())
      subdirs_.push_back(subdir);
    ok_ = ok_ && r.all_passed();
    std::printf("%s  [%s]  -> %s\n", r.id.c_str(), r.all_passed() ? "pass" : "FAIL",
                dir.c_str());
    for (const auto& c : r.checks)
      std::printf("    %-4s %s%s%s\n", c.passed ? "ok" : "FAIL", c.name.c_str(),
                  c.detail.empty() ? "" : "  ", c.detail.c_str());
  }

  int finish() {
    nlohmann::ordered_json m;
    m["tool"] = "fecand";
    m["version"] = kVersion;
    m["compiler"] = __VERSION__;
    m["command"] = command_;
    m["argv"] = flags_.argv;
    m["seed"] = config_.seed;
    m["config_digest"] = digest_of(config_.canonical());
    m["schema_version"] = kSchemaVersion;
    m["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config_.entries())
      m["config"][k] = {{"value", v}, {"source", to_string(config_.source_of(k))}};
    m["reports"] = reports_;
    m["passed"] = ok_;
    std::filesystem::create_directories(config_.out);
    const std::string text = m.dump(2) + "\n";
    write_text_file(config_.out + "/manifest.json", text);
    for (const auto& d : subdirs_) write_text_file(config_.out + "/" + d + "/manifest.json", text);
    return ok_ ? 0 : kExitChecksFailed;
  }

  const RunConfig& config() const { return config_; }

 private:
  RunConfig config_;
  Flags flags_;
  std::string command_;
  nlohmann::ordered_json reports_ = nlohmann::ordered_json::array();
  std::vector<std::string> subdirs_;
  bool ok_ = true;
};

void run_device(Session& s, double vgs_min, double vgs_max, int points, double amplitude) {
  const Technology& t = s.config().tech;
  s.emit(device_sweep(t, vgs_min, vgs_max, points), "device-sweep",
         {{"device_sweep", "vgs_volts", {"ids_amps_state0", "ids_amps_state1"}, true, ""}});
  const double amp = amplitude > 0.0 ? amplitude : 3.0 * t.ferro.coercive_voltage();
  s.emit(hysteresis_loop(t, amp), "device-sweep",
         {{"hysteresis", "v_volts", {"p_c_per_m2"}, false, ""}});
}

void run_long_bitline(Session& s) {
  LongBitlineOptions o;
  o.threads = s.config().threads;
  if (s.config().source_of("rows") != Source::kDefault) {
    for (int r = 2; r <= s.config().rows; r *= 2) o.sizes.push_back(r);
    if (o.sizes.empty()) o.sizes.push_back(2);
  }
  s.emit(long_bitline_sweep(s.config().tech, o), "long-bitline",
         {{"long_bitline", "rows", {"i_read0_amps", "i_read1_amps"}, true, "topology"}});
}

void run_disturb(Session& s) {
  s.emit(disturb_matrix(s.config().tech, s.config().rows, s.config().cols), "disturb-matrix");
}

void run_word_write(Session& s, bool word_given) {
  const RunConfig& c = s.config();
  WordWriteOptions o;
  if (c.source_of("rows") != Source::kDefault) o.rows = c.rows;
  if (c.source_of("cols") != Source::kDefault) o.cols = c.cols;
  o.ones_first = c.ones_first;
  if (word_given || c.source_of("word") != Source::kDefault) {
    if (o.cols < 31 && c.word >= (1u << o.cols))
      throw ConfigError(ConfigErrorCode::kOutOfRange, "config: word does not fit in cols bits");
    o.words = {c.word};
  }
  const ExperimentReport r = word_write_demo(c.tech, o);
  const Table& t = r.table("word_write");
  if (t.rows.size() <= 16) std::printf("%s", t.to_csv().c_str());
  s.emit(r, "word-write");
}

void run_mc(Session& s) {
  s.emit(monte_carlo(s.config().tech, s.config().mc_config()), "monte-carlo",
         {{"mc_histogram", "bin_lo", {"count"}, false, "quantity"}});
}

void run_power(Session& s) {
  PowerSweepOptions o;
  o.threads = s.config().threads;
  s.emit(power_sweep(s.config().tech, o), "power",
         {{"power", "rows", {"p_total_watts", "p_sl_watts", "p_wl_watts"}, true, ""}});
}

void run_accumulative(Session& s) {
  AccumulativeOptions o;
  o.max_pulses = s.config().max_pulses;
  o.pulse_width = s.config().tech.bias.t_pulse;
  o.threads = s.config().threads;
  s.emit(accumulative_disturb_sweep(s.config().tech, o), "accumulative-disturb",
         {{"accumulative_disturb", "pulses", {"vt_volts"}, false, "case"}});
}

void run_read(Session& s) {
  const RunConfig& c = s.config();
  const Technology& t = c.tech;
  ExperimentReport r;
  r.id = "read";
  r.digest = digest_of("read\n" + c.canonical());
  const ArrayConfig cfg = t.array(c.topology, c.rows, c.cols);
  ArrayState state = ArrayState::uniform(cfg, t, t.written_cell(true));
  state.cell(0, 0) = t.written_cell(false);
  const ReadResult res = read_cell(state, 0, 0);
  Table tab{"read_result", {"bl_index", "i_amps"}, {}};
  for (size_t i = 0; i < res.bl_index.size(); ++i)
    tab.add({fmt(res.bl_index[i]), fmt(res.bl_current[i])});
  r.tables.push_back(std::move(tab));
  r.metric("iterations", res.iterations);
  r.metric("residual_amps", res.residual);
  r.metric("supply_current_amps", res.supply_current);
  r.check("converged", res.residual < SolverOptions{}.tolerance);
  s.emit(r, "read");
}

void print_table(const Table& t) {
  std::string line;
  for (const auto& h : t.header) line += h + "\t";
  std::printf("%s\n", line.c_str());
  for (const auto& row : t.rows) {
    line.clear();
    for (const auto& v : row) line += v + "\t";
    std::printf("%s\n", line.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FeFET AND / C-AND memory array simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Flags f;
  f.argv.assign(argv, argv + argc);
  app.add_option("--config", f.config_path, "Configuration file (key = value)");
  app.add_option("--set", f.sets, "Override any config key: key=value (repeatable)");
  app.add_option("--seed", f.seed, "Random seed");
  app.add_option("--out", f.out, "Output directory (default $FECAND_OUT or fecand-out)");
  app.add_option("--samples", f.samples, "Monte-Carlo samples");
  app.add_option("--rows", f.rows, "Array rows");
  app.add_option("--cols", f.cols, "Array columns");
  app.add_option("--topology", f.topology, "and | cand");
  app.add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  app.add_flag("--plot", f.plot, "Also write SVG charts");

  double vgs_min = -0.5, vgs_max = 2.5, loop_amp = 0.0;
  int points = 121;
  auto* dev = app.add_subcommand("device-sweep", "I_DS-V_GS curves and P-V loop");
  dev->add_option("--vgs-min", vgs_min);
  dev->add_option("--vgs-max", vgs_max);
  dev->add_option("--points", points);
  dev->add_option("--loop-amplitude", loop_amp, "P-V sweep amplitude [V] (default 3 Vc)");

  std::optional<double> vw0, vw1;
  std::string scheme = "mixed";
  double margin = 0.5;
  auto* ver = app.add_subcommand("verify-scheme", "Static disturb audit of a write scheme");
  ver->add_option("--vw0", vw0, "Write '0' voltage (negative)");
  ver->add_option("--vw1", vw1, "Write '1' voltage (positive)");
  ver->add_option("--scheme", scheme, "vdd3 | vdd2 | mixed");
  ver->add_option("--margin", margin, "Partial-risk fraction of the threshold");

  std::string experiment;
  std::optional<std::string> word;
  std::optional<std::string> order;
  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("experiment", experiment,
                  "long-bitline | disturb-matrix | word-write | monte-carlo | power | "
                  "accumulative-disturb | read")
      ->required();
  run->add_option("--word", word, "Word for word-write (e.g. 0x0F)");
  run->add_option("--write-order", order, "zeros_first | ones_first");

  auto* mc = app.add_subcommand("mc", "Monte-Carlo process variation");
  auto* pow = app.add_subcommand("power", "Read power versus array size");
  double spacing = -1.0;
  auto* area = app.add_subcommand("area", "Cell area of both topologies");
  area->add_option("--spacing", spacing, "Bulk well spacing [lambda]");
  auto* all = app.add_subcommand("all", "Every experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (word) f.sets.push_back("word=" + *word);
    if (order) f.sets.push_back("write_order=" + *order);
    const RunConfig cfg = resolve(f);
    std::string command = app.get_subcommands().front()->get_name();
    if (*run) command += " " + experiment;
    Session s(cfg, f, command);

    if (*dev) {
      run_device(s, vgs_min, vgs_max, points, loop_amp);
    } else if (*ver) {
      const double a = vw0.value_or(cfg.tech.bias.vw0);
      const double b = vw1.value_or(cfg.tech.bias.vw1);
      const ExperimentReport r = scheme_audit(a, b, write_scheme_from_string(scheme), margin);
      print_table(r.table("scheme_audit"));
      s.emit(r, "verify-scheme");
    } else if (*run) {
      if (experiment == "long-bitline") run_long_bitline(s);
      else if (experiment == "disturb-matrix") run_disturb(s);
      else if (experiment == "word-write") run_word_write(s, word.has_value());
      else if (experiment == "monte-carlo") run_mc(s);
      else if (experiment == "power") run_power(s);
      else if (experiment == "accumulative-disturb") run_accumulative(s);
      else if (experiment == "read") run_read(s);
      else {
        std::fprintf(stderr, "unknown experiment '%s'\n", experiment.c_str());
        return kExitOther;
      }
    } else if (*mc) {
      run_mc(s);
    } else if (*pow) {
      run_power(s);
    } else if (*area) {
      const ExperimentReport r = area_report(spacing >= 0.0 ? spacing : cfg.tech.bulk_spacing);
      print_table(r.table("area"));
      std::printf("ratio without spacing %.2f, with spacing %.2f\n",
                  r.metric_value("ratio_no_spacing"), r.metric_value("ratio_with_spacing"));
      s.emit(r, "area");
    } else if (*all) {
      run_device(s, vgs_min, vgs_max, points, loop_amp);
      s.emit(scheme_audit(cfg.tech.bias.vw0, cfg.tech.bias.vw1, WriteScheme::kMixed, margin),
             "verify-scheme");
      run_long_bitline(s);
      run_disturb(s);
      run_word_write(s, false);
      run_mc(s);
      run_power(s);
      run_accumulative(s);
      s.emit(area_report(cfg.tech.bulk_spacing), "area");
    }
    return s.finish();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.code());
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s (last residual %g)\n", e.what(), e.last_residual());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitOther;
  }
}
