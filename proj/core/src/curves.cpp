#include "stav/curves.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "stav/errors.hpp"

namespace stav {

namespace {

constexpr char kMagic[5] = {'S', 'T', 'A', 'V', '1'};

std::vector<std::int64_t> reduced_coeffs(const IntPoly& poly, std::int64_t p) {
  std::vector<std::int64_t> out(poly.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod_reduce(poly.coeff(i), p);
  return out;
}

std::int64_t horner(const std::vector<std::int64_t>& c, std::int64_t x, std::int64_t p) {
  std::int64_t acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = (acc * x + c[i]) % p;
  return acc;
}

TraceTable build_with_qr(const CurveFamily& fam, std::int64_t p,
                         const std::int8_t* qr) {
  if (!fam.nondegenerate) throw FamilyError("trace table requested for degenerate family: " + fam.reason);
  if (p <= 3) throw std::invalid_argument("trace table: prime must exceed 3");

  const auto fc = reduced_coeffs(fam.f, p);
  const auto gc = reduced_coeffs(fam.g, p);

  TraceTable table;
  table.p = p;
  table.family_id = fam.id;
  table.a.resize(static_cast<std::size_t>(p));

  for (std::int64_t w = 0; w < p; ++w) {
    std::int64_t fw = horner(fc, w, p);
    std::int64_t gw = horner(gc, w, p);
    // delta(w) = -16 (4 fw^3 + 27 gw^2) mod p
    std::int64_t f3 = fw * fw % p * fw % p;
    std::int64_t g2 = gw * gw % p;
    std::int64_t d = (4 * f3 + 27 * g2) % p;
    d = (p - 16 % p * d % p) % p;
    if (d == 0) {
      table.a[static_cast<std::size_t>(w)] = kBadTrace;
      continue;
    }
    // #E = p + 1 + sum_x chi(x^3 + fw x + gw), so a = -sum chi.
    std::int64_t s = 0;
    for (std::int64_t x = 0; x < p; ++x) {
      std::int64_t val = ((x * x % p + fw) % p * x + gw) % p;
      s += qr[val];
    }
    table.a[static_cast<std::size_t>(w)] = static_cast<std::int32_t>(-s);
  }
  return table;
}

std::vector<std::int8_t> local_qr(std::int64_t p) {
  std::vector<std::int8_t> qr(static_cast<std::size_t>(p), -1);
  qr[0] = 0;
  for (std::int64_t i = 1; i < p; ++i) qr[static_cast<std::size_t>(i * i % p)] = 1;
  return qr;
}

void put_u64le(std::ofstream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void put_i32le(std::ofstream& os, std::int32_t v) {
  auto u = static_cast<std::uint32_t>(v);
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint64_t get_u64le(const unsigned char* b) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::int32_t get_i32le(const unsigned char* b) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return static_cast<std::int32_t>(v);
}

}  // namespace

TraceTable build_trace_table(const CurveFamily& fam, const ModContext& ctx) {
  return build_with_qr(fam, ctx.p(), ctx.qr_table().data());
}

TraceTable build_trace_table(const CurveFamily& fam, std::int64_t p) {
  if (p <= 3 || !is_prime(p)) throw std::invalid_argument("trace table: need a prime > 3");
  auto qr = local_qr(p);
  return build_with_qr(fam, p, qr.data());
}

std::int64_t trace_at(const CurveFamily& fam, std::int64_t p, std::int64_t w) {
  if (p <= 3 || !is_prime(p)) throw std::invalid_argument("trace_at: need a prime > 3");
  auto qr = local_qr(p);
  const auto fc = reduced_coeffs(fam.f, p);
  const auto gc = reduced_coeffs(fam.g, p);
  std::int64_t ww = ((w % p) + p) % p;
  std::int64_t fw = horner(fc, ww, p);
  std::int64_t gw = horner(gc, ww, p);
  std::int64_t f3 = fw * fw % p * fw % p;
  std::int64_t d = (p - 16 % p * ((4 * f3 + 27 * gw * gw % p) % p) % p) % p;
  if (d == 0) return kBadTrace;
  std::int64_t s = 0;
  for (std::int64_t x = 0; x < p; ++x) {
    std::int64_t val = ((x * x % p + fw) % p * x + gw) % p;
    s += qr[static_cast<std::size_t>(val)];
  }
  return -s;
}

double frobenius_angle(std::int64_t a, std::int64_t p) {
  if (p < 2) throw std::invalid_argument("frobenius_angle: p must be prime");
  if ((__int128)a * a > (__int128)4 * p)
    throw std::invalid_argument("frobenius_angle: trace violates the Hasse bound");
  double c = static_cast<double>(a) / (2.0 * std::sqrt(static_cast<double>(p)));
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

AngleTable AngleTable::from(const TraceTable& traces) {
  AngleTable out;
  out.p = traces.p;
  out.family_id = traces.family_id;
  out.psi.resize(traces.a.size());
  for (std::size_t w = 0; w < traces.a.size(); ++w) {
    out.psi[w] = traces.a[w] == kBadTrace ? -1.0 : frobenius_angle(traces.a[w], traces.p);
  }
  return out;
}

bool good_reduction(const CurveFamily& fam, const BigRat& t, std::int64_t p) {
  if (p <= 3) throw std::invalid_argument("good_reduction: prime must exceed 3");
  BigRat d = fam.delta.eval(t);
  return !divides(p, numerator(d)) && !divides(p, denominator(d));
}

std::optional<double> angle_for_param(const AngleTable& angles, const ModContext& ctx,
                                      std::int64_t u, std::int64_t v) {
  std::int64_t p = ctx.p();
  std::int64_t vr = ((v % p) + p) % p;
  if (vr == 0) return std::nullopt;
  std::int64_t ur = ((u % p) + p) % p;
  std::int64_t w = ur * ctx.inv(vr) % p;
  if (!angles.good(w)) return std::nullopt;
  return angles.psi[static_cast<std::size_t>(w)];
}

void write_trace_file(const std::filesystem::path& path, const TraceTable& table) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw CacheError("cannot open cache file for writing: " + tmp.string());
    os.write(kMagic, sizeof(kMagic));
    put_u64le(os, table.family_id);
    put_u64le(os, static_cast<std::uint64_t>(table.p));
    for (std::int32_t a : table.a) put_i32le(os, a);
    if (!os) throw CacheError("short write to cache file: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);  // atomic within one directory
}

TraceTable read_trace_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CacheError("cannot open cache file: " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(is)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < sizeof(kMagic) + 16) throw CacheError("cache file truncated: " + path.string());
  if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
    throw CacheError("cache file has bad magic: " + path.string());

  TraceTable table;
  table.family_id = get_u64le(buf.data() + 5);
  std::uint64_t p64 = get_u64le(buf.data() + 13);
  if (p64 == 0 || p64 > (std::uint64_t(1) << 24))
    throw CacheError("cache file has implausible prime: " + path.string());
  table.p = static_cast<std::int64_t>(p64);
  std::size_t expect = 21 + 4 * static_cast<std::size_t>(p64);
  if (buf.size() != expect) throw CacheError("cache file has wrong size: " + path.string());

  table.a.resize(static_cast<std::size_t>(p64));
  for (std::size_t w = 0; w < table.a.size(); ++w) {
    std::int32_t a = get_i32le(buf.data() + 21 + 4 * w);
    if (a != kBadTrace && (__int128)a * a > (__int128)4 * table.p)
      throw CacheError("cache entry violates the Hasse bound: " + path.string());
    table.a[w] = a;
  }
  return table;
}

}  // namespace stav
