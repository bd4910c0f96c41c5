#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <vector>

#include "stav/mod_arith.hpp"
#include "stav/poly_family.hpp"

namespace stav {

// Sentinel for parameters where the fiber is singular mod p.
inline constexpr std::int32_t kBadTrace = std::numeric_limits<std::int32_t>::min();

// Frobenius traces a(w) for every fiber of a family at one prime:
// a(w) = p + 1 - #E_w(F_p), with kBadTrace exactly where delta(w) = 0 mod p.
struct TraceTable {
  std::int64_t p = 0;
  std::uint64_t family_id = 0;
  std::vector<std::int32_t> a;

  bool good(std::int64_t w) const { return a[static_cast<std::size_t>(w)] != kBadTrace; }
};

TraceTable build_trace_table(const CurveFamily& fam, const ModContext& ctx);
// Same table without a full ModContext; builds only the residue row it needs.
TraceTable build_trace_table(const CurveFamily& fam, std::int64_t p);

// Trace of the single fiber at w; brute force over x in F_p.
std::int64_t trace_at(const CurveFamily& fam, std::int64_t p, std::int64_t w);

// psi = arccos(a / (2 sqrt p)) in [0, pi]; rejects traces past the Hasse bound.
double frobenius_angle(std::int64_t a, std::int64_t p);

// Angles for every good fiber; entries for singular fibers hold -1.
struct AngleTable {
  std::int64_t p = 0;
  std::uint64_t family_id = 0;
  std::vector<double> psi;

  static AngleTable from(const TraceTable& traces);
  bool good(std::int64_t w) const { return psi[static_cast<std::size_t>(w)] >= 0.0; }
};

// True iff p divides neither the numerator nor the denominator of the exact
// rational delta(t).
bool good_reduction(const CurveFamily& fam, const BigRat& t, std::int64_t p);

// Angle of the fiber at u/v mod p; empty when p | v or the fiber is singular.
std::optional<double> angle_for_param(const AngleTable& angles, const ModContext& ctx,
                                      std::int64_t u, std::int64_t v);

// Binary cache file layout: magic "STAV1", family hash (u64 LE), p (u64 LE),
// then p trace entries as i32 LE with kBadTrace marking singular fibers.
void write_trace_file(const std::filesystem::path& path, const TraceTable& table);
// Validates structure and the Hasse bound on every entry; throws CacheError.
TraceTable read_trace_file(const std::filesystem::path& path);

}  // namespace stav
