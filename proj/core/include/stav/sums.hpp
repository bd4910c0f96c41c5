#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stav/curves.hpp"
#include "stav/mod_arith.hpp"
#include "stav/param_sets.hpp"
#include "stav/poly_family.hpp"

namespace stav {

// sym_n(theta) = sin((n+1) theta) / sin(theta), evaluated by the Chebyshev
// recurrence s_0 = 1, s_1 = 2 cos theta, s_k = 2 cos theta s_{k-1} - s_{k-2};
// the endpoint limits n+1 and (-1)^n (n+1) are returned exactly.
double sym(int n, double theta);

// max(2, max_{1<=n<=N} |sum_i sym_n(psi_i)| / n); one-sided by construction,
// larger N can only raise it.
double sigma_estimate(std::span<const double> angles, int N);

// One magnitude-vs-reference-scale observation; `ratio` is their quotient.
struct BoundCheckRecord {
  std::string sum_id;
  std::int64_t p = 0;
  std::int64_t T = 0;
  int n = 0;
  std::int64_t m_or_k = 0;
  double magnitude = 0.0;
  double reference_scale = 0.0;
  double ratio = 0.0;
};

std::string bound_check_csv_header();
std::string bound_check_csv_row(const BoundCheckRecord& rec);

// Everything character sums need at one prime of one family.
struct PrimeData {
  ModContext ctx;
  TraceTable traces;
  AngleTable angles;
  std::vector<std::complex<double>> roots_p;    // e_p(k)
  std::vector<std::complex<double>> roots_pm1;  // e_{p-1}(k), for chi^k

  PrimeData(const CurveFamily& fam, std::int64_t p);
  PrimeData(const CurveFamily& fam, TraceTable cached);
};

struct ComplexSumResult {
  std::complex<double> value;
  BoundCheckRecord record;
};

// sum over good w of sym_n(psi(w)) e_p(m w); reference scale n sqrt(p).
ComplexSumResult michel_sum_additive(const PrimeData& pd, int n, std::int64_t m);
// sum over good w of sym_n(psi(w)) chi^k(w); chi(0) = 0, same reference scale.
ComplexSumResult michel_sum_mult(const PrimeData& pd, int n, std::int64_t k);

// sum of e_m(a u v^{-1}) over members with gcd(v, m) = 1.  a = 0 degenerates
// to the admissible-pair count.  Reference scales: sqrt(T m) for convex
// regions (which require T < m), T + T^2/m for Z/ZSTAR/FAREY.
ComplexSumResult exp_sum_ratios(const PairSet& set, std::int64_t m, std::int64_t a);
ComplexSumResult exp_sum_ratios(const ConvexRegion& region, std::int64_t m, std::int64_t a);

// Row-structured form: v in [V+1, V+W] with gcd(v, m) = 1, u in
// [lo[v-V-1]+1, hi[v-V-1]]; inner u-ranges collapse to geometric series.
std::complex<double> exp_sum_rows(std::int64_t V, std::int64_t W,
                                  std::span<const std::int64_t> lo,
                                  std::span<const std::int64_t> hi,
                                  std::int64_t m, std::int64_t a);

struct RealSumResult {
  double value = 0.0;
  BoundCheckRecord record;
};

// sum of sym_n over the angles of a parameter set at one prime.  Membership:
// p must not divide v (Z/ZSTAR/FAREY and convex regions, which also require
// T < p), or for FAREY_PRODUCT neither part of the reduced product r s, and
// the fiber must be good.  Reference scales: n sqrt(T) p (convex),
// n (T^2 p^{-1/2} + T p^{1/2}) (Z/ZSTAR/FAREY),
// n (T^4 p^{-1/2} + T^2 p^{1/2} log^2 p) (FAREY_PRODUCT).
RealSumResult sym_sum_over_set(const PrimeData& pd, const PairSet& set, int n);
RealSumResult sym_sum_over_set(const PrimeData& pd, const ConvexRegion& region, int n);

// W(T, p): quadruples (u1, v1, u2, v2) in [1, T]^4, all coprime to p, with
// u1 v1^{-1} = u2 v2^{-1} mod p; computed as sum of squared bucket counts.
std::int64_t congruence_count(std::int64_t T, std::int64_t p);
BoundCheckRecord congruence_record(std::int64_t T, std::int64_t p);

}  // namespace stav
