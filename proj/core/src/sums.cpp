#include "stav/sums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "stav/util.hpp"

namespace stav {

namespace {

double log_sq(std::int64_t p) {
  double l = std::log(static_cast<double>(p));
  return l * l;
}

BoundCheckRecord make_record(std::string id, std::int64_t p, std::int64_t T, int n,
                             std::int64_t m_or_k, double magnitude, double scale) {
  BoundCheckRecord rec;
  rec.sum_id = std::move(id);
  rec.p = p;
  rec.T = T;
  rec.n = n;
  rec.m_or_k = m_or_k;
  rec.magnitude = magnitude;
  rec.reference_scale = scale;
  rec.ratio = scale > 0 ? magnitude / scale : 0.0;
  return rec;
}

double sym_ref_scale(SetKind kind, int n, std::int64_t T, std::int64_t p) {
  double dn = n, dT = static_cast<double>(T), dp = static_cast<double>(p);
  switch (kind) {
    case SetKind::Convex:
      return dn * std::sqrt(dT) * dp;
    case SetKind::FareyProduct:
      return dn * (dT * dT * dT * dT / std::sqrt(dp) + dT * dT * std::sqrt(dp) * log_sq(p));
    default:
      return dn * (dT * dT / std::sqrt(dp) + dT * std::sqrt(dp));
  }
}

}  // namespace

double sym(int n, double theta) {
  if (n < 0) throw std::invalid_argument("sym: order must be non-negative");
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw std::invalid_argument("sym: angle outside [0, pi]");
  if (theta == 0.0) return n + 1.0;
  if (theta == std::numbers::pi) return (n % 2 == 0) ? n + 1.0 : -(n + 1.0);
  if (n == 0) return 1.0;
  double twoc = 2.0 * std::cos(theta);
  if (n == 1) return twoc;
  double prev = 1.0, cur = twoc;
  for (int k = 2; k <= n; ++k) {
    double next = twoc * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double sigma_estimate(std::span<const double> angles, int N) {
  if (N < 1) throw std::invalid_argument("sigma_estimate: N must be >= 1");
  // One recurrence pass per angle feeds all orders at once.
  std::vector<PairwiseSum<double>> sums(static_cast<std::size_t>(N));
  for (double theta : angles) {
    double twoc = 2.0 * std::cos(theta);
    double prev = 1.0, cur = twoc;
    for (int n = 1; n <= N; ++n) {
      sums[static_cast<std::size_t>(n - 1)].add(cur);
      double next = twoc * cur - prev;
      prev = cur;
      cur = next;
    }
  }
  double best = 2.0;
  for (int n = 1; n <= N; ++n) {
    double v = std::abs(sums[static_cast<std::size_t>(n - 1)].total()) / n;
    if (v > best) best = v;
  }
  return best;
}

std::string bound_check_csv_header() {
  return "sum_id,p,T,n,m_or_k,magnitude,reference_scale,ratio";
}

std::string bound_check_csv_row(const BoundCheckRecord& rec) {
  return rec.sum_id + "," + std::to_string(rec.p) + "," + std::to_string(rec.T) + "," +
         std::to_string(rec.n) + "," + std::to_string(rec.m_or_k) + "," +
         format_double(rec.magnitude) + "," + format_double(rec.reference_scale) + "," +
         format_double(rec.ratio);
}

PrimeData::PrimeData(const CurveFamily& fam, std::int64_t p)
    : ctx(p),
      traces(build_trace_table(fam, ctx)),
      angles(AngleTable::from(traces)),
      roots_p(unit_roots(p)),
      roots_pm1(unit_roots(p - 1)) {}

PrimeData::PrimeData(const CurveFamily& fam, TraceTable cached)
    : ctx(cached.p),
      traces(std::move(cached)),
      angles(AngleTable::from(traces)),
      roots_p(unit_roots(ctx.p())),
      roots_pm1(unit_roots(ctx.p() - 1)) {
  if (traces.family_id != fam.id)
    throw std::invalid_argument("PrimeData: cached table belongs to a different family");
}

ComplexSumResult michel_sum_additive(const PrimeData& pd, int n, std::int64_t m) {
  const std::int64_t p = pd.ctx.p();
  std::int64_t mr = ((m % p) + p) % p;
  PairwiseSum<std::complex<double>> acc;
  for (std::int64_t w = 0; w < p; ++w) {
    if (!pd.angles.good(w)) continue;
    double s = sym(n, pd.angles.psi[static_cast<std::size_t>(w)]);
    acc.add(s * pd.roots_p[static_cast<std::size_t>(mr * w % p)]);
  }
  ComplexSumResult out;
  out.value = acc.total();
  out.record = make_record("mich_add", p, 0, n, m, std::abs(out.value),
                           n * std::sqrt(static_cast<double>(p)));
  return out;
}

ComplexSumResult michel_sum_mult(const PrimeData& pd, int n, std::int64_t k) {
  const std::int64_t p = pd.ctx.p();
  std::int64_t kr = ((k % (p - 1)) + (p - 1)) % (p - 1);
  PairwiseSum<std::complex<double>> acc;
  for (std::int64_t w = 1; w < p; ++w) {  // chi(0) = 0 drops w = 0
    if (!pd.angles.good(w)) continue;
    double s = sym(n, pd.angles.psi[static_cast<std::size_t>(w)]);
    acc.add(s * pd.roots_pm1[static_cast<std::size_t>(kr * pd.ctx.dlog(w) % (p - 1))]);
  }
  ComplexSumResult out;
  out.value = acc.total();
  out.record = make_record("mich_mult", p, 0, n, k, std::abs(out.value),
                           n * std::sqrt(static_cast<double>(p)));
  return out;
}

namespace {

ComplexSumResult exp_sum_over_pairs(const std::vector<LatticePoint>& pairs, SetKind kind,
                                    std::int64_t T, std::int64_t m, std::int64_t a) {
  auto roots = unit_roots(m);
  std::int64_t ar = ((a % m) + m) % m;
  // Inverses are cached per denominator; members span a bounded v-range.
  std::vector<std::int64_t> inv_cache;
  PairwiseSum<std::complex<double>> acc;
  for (const auto& pr : pairs) {
    if (std::gcd(pr.v % m, m) != 1) continue;
    std::int64_t vr = ((pr.v % m) + m) % m;
    if (static_cast<std::size_t>(vr) >= inv_cache.size())
      inv_cache.resize(static_cast<std::size_t>(m), -1);
    std::int64_t& iv = inv_cache[static_cast<std::size_t>(vr)];
    if (iv < 0) iv = inv_mod(vr, m);
    std::int64_t idx = ar * (pr.u % m) % m * iv % m;
    acc.add(roots[static_cast<std::size_t>(((idx % m) + m) % m)]);
  }
  ComplexSumResult out;
  out.value = acc.total();
  double dT = static_cast<double>(T), dm = static_cast<double>(m);
  double scale = kind == SetKind::Convex ? std::sqrt(dT * dm) : dT + dT * dT / dm;
  std::string id = std::string("expsum_") +
                   (kind == SetKind::Convex  ? "conv"
                    : kind == SetKind::Z     ? "z"
                    : kind == SetKind::ZStar ? "zstar"
                                             : "farey");
  out.record = make_record(std::move(id), m, T, 0, a, std::abs(out.value), scale);
  return out;
}

}  // namespace

ComplexSumResult exp_sum_ratios(const PairSet& set, std::int64_t m, std::int64_t a) {
  if (m < 2) throw std::invalid_argument("exp_sum_ratios: modulus must be >= 2");
  if (set.kind == SetKind::FareyProduct)
    throw std::invalid_argument("exp_sum_ratios: product sets are not supported");
  if (set.kind == SetKind::Convex && set.T >= m)
    throw std::invalid_argument("exp_sum_ratios: convex regions require T < modulus");
  return exp_sum_over_pairs(set.pairs, set.kind, set.T, m, a);
}

ComplexSumResult exp_sum_ratios(const ConvexRegion& region, std::int64_t m, std::int64_t a) {
  if (m < 2) throw std::invalid_argument("exp_sum_ratios: modulus must be >= 2");
  if (region.T() >= m)
    throw std::invalid_argument("exp_sum_ratios: convex regions require T < modulus");
  return exp_sum_over_pairs(lattice_points(region), SetKind::Convex, region.T(), m, a);
}

std::complex<double> exp_sum_rows(std::int64_t V, std::int64_t W,
                                  std::span<const std::int64_t> lo,
                                  std::span<const std::int64_t> hi,
                                  std::int64_t m, std::int64_t a) {
  if (m < 2) throw std::invalid_argument("exp_sum_rows: modulus must be >= 2");
  if (W < 1 || lo.size() != static_cast<std::size_t>(W) || hi.size() != lo.size())
    throw std::invalid_argument("exp_sum_rows: need one u-range per row");
  auto roots = unit_roots(m);
  std::int64_t ar = ((a % m) + m) % m;
  auto root_at = [&](std::int64_t e) { return roots[static_cast<std::size_t>(((e % m) + m) % m)]; };

  std::complex<double> total = 0.0;
  for (std::int64_t v = V + 1; v <= V + W; ++v) {
    if (std::gcd(((v % m) + m) % m, m) != 1) continue;
    std::int64_t L = lo[static_cast<std::size_t>(v - V - 1)];
    std::int64_t U = hi[static_cast<std::size_t>(v - V - 1)];
    if (U <= L) continue;
    std::int64_t b = ar * inv_mod(((v % m) + m) % m, m) % m;
    if (b == 0) {
      total += static_cast<double>(U - L);
      continue;
    }
    // Geometric series: sum_{u=L+1}^{U} r^u with r = e_m(b).
    std::complex<double> r = root_at(b);
    std::complex<double> first = root_at((L + 1) % m * b);
    std::complex<double> ratio_pow = root_at((U - L) % m * b);
    total += first * (ratio_pow - 1.0) / (r - 1.0);
  }
  return total;
}

namespace {

RealSumResult sym_sum_impl(const PrimeData& pd, const PairSet& set, int n) {
  const std::int64_t p = pd.ctx.p();
  PairwiseSum<double> acc;
  if (set.kind == SetKind::FareyProduct) {
    set.for_each_param([&](std::int64_t num, std::int64_t den) {
      std::int64_t g = std::gcd(num, den);
      std::int64_t nr = (num / g) % p;
      std::int64_t dr = (den / g) % p;
      if (nr == 0 || dr == 0) return;  // p divides the reduced product
      std::int64_t w = nr * pd.ctx.inv(dr) % p;
      if (!pd.angles.good(w)) return;
      acc.add(sym(n, pd.angles.psi[static_cast<std::size_t>(w)]));
    });
  } else {
    for (const auto& pr : set.pairs) {
      std::int64_t vr = pr.v % p;
      if (vr == 0) continue;
      std::int64_t w = (pr.u % p) * pd.ctx.inv(vr) % p;
      if (!pd.angles.good(w)) continue;
      acc.add(sym(n, pd.angles.psi[static_cast<std::size_t>(w)]));
    }
  }
  RealSumResult out;
  out.value = acc.total();
  std::string id = std::string("symsum_") +
                   (set.kind == SetKind::Convex        ? "conv"
                    : set.kind == SetKind::Z            ? "z"
                    : set.kind == SetKind::ZStar        ? "zstar"
                    : set.kind == SetKind::Farey        ? "farey"
                                                        : "fprod");
  out.record = make_record(std::move(id), p, set.T, n, 0, std::abs(out.value),
                           sym_ref_scale(set.kind, n, set.T, p));
  return out;
}

}  // namespace

RealSumResult sym_sum_over_set(const PrimeData& pd, const PairSet& set, int n) {
  if (n < 1) throw std::invalid_argument("sym_sum_over_set: order must be >= 1");
  if (set.kind == SetKind::Convex && set.T >= pd.ctx.p())
    throw std::invalid_argument("sym_sum_over_set: convex regions require T < p");
  return sym_sum_impl(pd, set, n);
}

RealSumResult sym_sum_over_set(const PrimeData& pd, const ConvexRegion& region, int n) {
  if (n < 1) throw std::invalid_argument("sym_sum_over_set: order must be >= 1");
  if (region.T() >= pd.ctx.p())
    throw std::invalid_argument("sym_sum_over_set: convex regions require T < p");
  return sym_sum_impl(pd, convex_pair_set(region), n);
}

std::int64_t congruence_count(std::int64_t T, std::int64_t p) {
  if (T < 1) throw std::invalid_argument("congruence_count: T must be positive");
  if (p <= 3 || !is_prime(p)) throw std::invalid_argument("congruence_count: need a prime > 3");
  // Bucket u v^{-1} over admissible pairs; W = sum of squared bucket sizes.
  std::vector<std::int64_t> inv_cache(static_cast<std::size_t>(std::min(p, T + 1)), -1);
  auto inv_of = [&](std::int64_t vr) {
    if (static_cast<std::size_t>(vr) < inv_cache.size()) {
      std::int64_t& iv = inv_cache[static_cast<std::size_t>(vr)];
      if (iv < 0) iv = inv_mod(vr, p);
      return iv;
    }
    return inv_mod(vr, p);
  };
  std::int64_t w = 0;
  if (p <= 4 * T * T + 64) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(p), 0);
    for (std::int64_t u = 1; u <= T; ++u) {
      if (u % p == 0) continue;
      std::int64_t ur = u % p;
      for (std::int64_t v = 1; v <= T; ++v) {
        if (v % p == 0) continue;
        ++counts[static_cast<std::size_t>(ur * inv_of(v % p) % p)];
      }
    }
    for (std::int64_t c : counts) w += c * c;
  } else {
    // Sparse residues: sort the at most T^2 values and square the run lengths.
    std::vector<std::int64_t> res;
    res.reserve(static_cast<std::size_t>(T * T));
    for (std::int64_t u = 1; u <= T; ++u) {
      if (u % p == 0) continue;
      std::int64_t ur = u % p;
      for (std::int64_t v = 1; v <= T; ++v) {
        if (v % p == 0) continue;
        res.push_back(ur * inv_of(v % p) % p);
      }
    }
    std::sort(res.begin(), res.end());
    for (std::size_t i = 0; i < res.size();) {
      std::size_t j = i;
      while (j < res.size() && res[j] == res[i]) ++j;
      w += static_cast<std::int64_t>(j - i) * static_cast<std::int64_t>(j - i);
      i = j;
    }
  }
  return w;
}

BoundCheckRecord congruence_record(std::int64_t T, std::int64_t p) {
  std::int64_t w = congruence_count(T, p);
  double dT = static_cast<double>(T), dp = static_cast<double>(p);
  double scale = dT * dT * dT * dT / dp + dT * dT * log_sq(p);
  return make_record("congruence", p, T, 0, 0, static_cast<double>(w), scale);
}

}  // namespace stav
