#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stav/curves.hpp"
#include "stav/poly_family.hpp"

namespace stav {

// Directory of per-(family, prime) trace files.  Writers stage to a temp name
// and rename, so concurrent runs can share a directory.
class TraceCache {
 public:
  explicit TraceCache(std::filesystem::path dir);

  // Loads the table when present (validating it), builds and stores otherwise.
  TraceTable get_or_build(const CurveFamily& fam, std::int64_t p);

  const std::filesystem::path& dir() const { return dir_; }
  std::uint64_t hits() const { return hits_.load(); }
  std::uint64_t misses() const { return misses_.load(); }

  static std::string file_name(std::uint64_t family_id, std::int64_t p);

 private:
  std::filesystem::path dir_;
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> misses_{0};
};

struct CacheFileInfo {
  std::string name;
  std::uint64_t family_id = 0;
  std::int64_t p = 0;
  std::uintmax_t bytes = 0;
};

struct CacheStatsReport {
  std::int64_t files = 0;
  std::uintmax_t bytes = 0;
  std::vector<CacheFileInfo> entries;
};

CacheStatsReport cache_stats(const std::filesystem::path& dir);

struct CacheCorruption {
  std::string file;
  std::string message;
};

struct CacheVerifyReport {
  std::int64_t files_checked = 0;
  std::int64_t entries_recounted = 0;
  std::vector<CacheCorruption> corrupt;
};

// Structural validation of every file; for files of the given family, a
// deterministic ~1% sample of entries is recounted from scratch and must
// match exactly.
CacheVerifyReport cache_verify(const std::filesystem::path& dir, const CurveFamily& fam,
                               std::uint64_t seed);

// Removes the given family's files; returns how many were deleted.
std::int64_t cache_purge(const std::filesystem::path& dir, std::uint64_t family_id);

}  // namespace stav
