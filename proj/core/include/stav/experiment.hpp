#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stav/config.hpp"
#include "stav/param_sets.hpp"
#include "stav/poly_family.hpp"

namespace stav {

inline constexpr const char* kVersion = "0.1.0";

struct RunManifest {
  std::uint64_t config_hash = 0;
  std::string version = kVersion;
  std::string kind;
  std::int64_t cache_hits = 0;
  std::int64_t cache_misses = 0;
  std::int64_t wall_ms = 0;
  std::int64_t rows = 0;
  std::vector<std::string> outputs;
  std::vector<std::string> notes;

  std::string to_json() const;
};

// Family from [family] f/g (ascending coefficient lists).  Throws FamilyError
// when the nondegeneracy certificate fails, ConfigError when keys are missing.
CurveFamily family_from_config(const Config& cfg);

// Runs one experiment kind: trace-table, vertical, theorem1, theorem2,
// theorem3, michel, expsum or congruence.  Reads everything else from the
// config, writes the CSV (and manifest JSON next to it) named by [run] out,
// and resumes from the trace cache named by [run] cache when present.
RunManifest run_experiment(const Config& cfg, const std::string& kind);

// Compact digest of a result CSV (any of the emitted schemas).
std::string summarize_csv(const std::filesystem::path& csv);

}  // namespace stav
