// Run configuration: `key = value` text files with a schema version, strict
// key checking and per-field provenance.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fecand/experiments.hpp"

namespace fecand {

inline constexpr int kSchemaVersion = 1;

enum class ConfigErrorCode {
  kMissingFile = 2,
  kUnknownKey = 3,
  kOutOfRange = 4,
  kParse = 5,
  kSchemaVersion = 6,
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ConfigErrorCode code() const { return code_; }

 private:
  ConfigErrorCode code_;
};

enum class Source { kDefault, kFile, kFlag };
const char* to_string(Source s);

struct RunConfig {
  Technology tech;
  int rows = 16;
  int cols = 16;
  Topology topology = Topology::kCand;
  std::uint64_t seed = 1;
  int samples = 1000;
  McConfig mc;  // sigmas and geometry-draw mode; seed/samples come from above
  int threads = 0;
  std::string out = "fecand-out";
  std::uint32_t word = 0x0F;
  bool ones_first = false;
  int max_pulses = 10000;
  bool plot = false;
  int schema_version = kSchemaVersion;

  std::map<std::string, Source> provenance;

  // Sets one key; throws ConfigError (unknown key / parse error).
  void set(const std::string& key, const std::string& value, Source source);
  // Checks every invariant; throws ConfigError(kOutOfRange).
  void validate() const;
  // Every key with its current value, in schema order.
  std::vector<std::pair<std::string, std::string>> entries() const;
  Source source_of(const std::string& key) const;
  McConfig mc_config() const;
  // Canonical text of the resolved configuration (digest input).
  std::string canonical() const;

  static const std::vector<std::string>& keys();
};

// Parses configuration text. Later layers (flags) are applied with set().
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
// Reads and parses a file; kMissingFile if it cannot be opened.
RunConfig parse_config(const std::string& path, RunConfig base = {});

}  // namespace fecand
