#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace stav {

struct PrimeList {
  std::uint64_t bound = 0;
  std::vector<std::int64_t> primes;
};

// Segmented Eratosthenes; memory O(sqrt(x) + segment).  x >= 2.
PrimeList sieve_primes(std::uint64_t x);

std::int64_t pow_mod(std::int64_t base, std::uint64_t exp, std::int64_t m);

// Inverse of a modulo m via extended gcd; returns -1 when gcd(a, m) != 1.
std::int64_t inv_mod(std::int64_t a, std::int64_t m);

bool is_prime(std::int64_t n);

// Per-prime lookup tables for a prime p in (3, 2^24]: quadratic-residue
// classification, modular inverses, the smallest primitive root, and the
// discrete-log table for that root.  Immutable after construction.
class ModContext {
 public:
  explicit ModContext(std::int64_t p);

  std::int64_t p() const { return p_; }
  std::int64_t generator() const { return gen_; }

  // Legendre symbol of a in [0, p): 0, 1 or -1.
  int qr(std::int64_t a) const { return qr_[static_cast<std::size_t>(a)]; }
  // Inverse of v in [1, p).
  std::int64_t inv(std::int64_t v) const { return inv_[static_cast<std::size_t>(v)]; }
  // Discrete log base generator() of x in [1, p); in [0, p-1).
  std::int64_t dlog(std::int64_t x) const { return log_[static_cast<std::size_t>(x)]; }

  const std::vector<std::int8_t>& qr_table() const { return qr_; }

 private:
  std::int64_t p_;
  std::int64_t gen_;
  std::vector<std::int8_t> qr_;
  std::vector<std::uint32_t> inv_;
  std::vector<std::uint32_t> log_;
};

// e_m(z) = exp(2 pi i z / m); m >= 2, composite moduli allowed.
std::complex<double> additive_char(std::int64_t m, std::int64_t z);

// chi^k(x) for the canonical generator character chi; 0 when x = 0 mod p.
std::complex<double> mult_char(const ModContext& ctx, std::int64_t k, std::int64_t x);

// Precomputed table of e_m(k) for k in [0, m); shared by character sums.
std::vector<std::complex<double>> unit_roots(std::int64_t m);

}  // namespace stav
