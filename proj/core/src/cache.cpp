#include "stav/cache.hpp"

#include <algorithm>
#include <random>

#include "stav/errors.hpp"
#include "stav/util.hpp"

namespace stav {

TraceCache::TraceCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string TraceCache::file_name(std::uint64_t family_id, std::int64_t p) {
  return hex16(family_id) + "-" + std::to_string(p) + ".stav";
}

TraceTable TraceCache::get_or_build(const CurveFamily& fam, std::int64_t p) {
  std::filesystem::path path = dir_ / file_name(fam.id, p);
  if (std::filesystem::exists(path)) {
    TraceTable table = read_trace_file(path);
    if (table.family_id != fam.id || table.p != p)
      throw CacheError("cache file does not match its name: " + path.string());
    hits_.fetch_add(1);
    return table;
  }
  TraceTable table = build_trace_table(fam, p);
  write_trace_file(path, table);
  misses_.fetch_add(1);
  return table;
}

namespace {

std::vector<std::filesystem::path> cache_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::exists(dir)) return files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".stav")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

CacheStatsReport cache_stats(const std::filesystem::path& dir) {
  CacheStatsReport report;
  for (const auto& path : cache_files(dir)) {
    CacheFileInfo info;
    info.name = path.filename().string();
    info.bytes = std::filesystem::file_size(path);
    try {
      TraceTable t = read_trace_file(path);
      info.family_id = t.family_id;
      info.p = t.p;
    } catch (const CacheError&) {
      info.family_id = 0;
      info.p = -1;  // flagged as unreadable; verify reports the details
    }
    report.bytes += info.bytes;
    ++report.files;
    report.entries.push_back(std::move(info));
  }
  return report;
}

CacheVerifyReport cache_verify(const std::filesystem::path& dir, const CurveFamily& fam,
                               std::uint64_t seed) {
  CacheVerifyReport report;
  for (const auto& path : cache_files(dir)) {
    ++report.files_checked;
    TraceTable table;
    try {
      table = read_trace_file(path);
    } catch (const CacheError& e) {
      report.corrupt.push_back({path.filename().string(), e.what()});
      continue;
    }
    if (table.family_id != fam.id) continue;  // structural check only

    // Deterministic 1% sample (at least one entry) recounted from scratch.
    std::mt19937_64 rng(seed ^ fnv1a(path.filename().string()));
    std::int64_t samples = std::max<std::int64_t>(1, table.p / 100);
    std::uniform_int_distribution<std::int64_t> pick(0, table.p - 1);
    bool mismatch = false;
    for (std::int64_t i = 0; i < samples && !mismatch; ++i) {
      std::int64_t w = pick(rng);
      std::int64_t expect = trace_at(fam, table.p, w);
      if (expect != table.a[static_cast<std::size_t>(w)]) {
        report.corrupt.push_back(
            {path.filename().string(),
             "entry " + std::to_string(w) + " recount " + std::to_string(expect) +
                 " != stored " + std::to_string(table.a[static_cast<std::size_t>(w)])});
        mismatch = true;
      }
    }
    report.entries_recounted += samples;
  }
  return report;
}

std::int64_t cache_purge(const std::filesystem::path& dir, std::uint64_t family_id) {
  std::int64_t removed = 0;
  std::string prefix = hex16(family_id) + "-";
  for (const auto& path : cache_files(dir)) {
    if (path.filename().string().rfind(prefix, 0) == 0) {
      std::filesystem::remove(path);
      ++removed;
    }
  }
  return removed;
}

}  // namespace stav
