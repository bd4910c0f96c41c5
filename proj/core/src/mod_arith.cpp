#include "stav/mod_arith.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stav {

namespace {
constexpr std::int64_t kContextCap = std::int64_t(1) << 24;
constexpr std::size_t kSegment = 1u << 16;
}  // namespace

PrimeList sieve_primes(std::uint64_t x) {
  if (x < 2) throw std::invalid_argument("sieve_primes: bound must be >= 2");
  PrimeList out;
  out.bound = x;

  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
  while ((root + 1) * (root + 1) <= x) ++root;
  while (root * root > x) --root;

  // Base primes up to sqrt(x) by a plain sieve.
  std::vector<bool> base(root + 1, true);
  std::vector<std::uint64_t> base_primes;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!base[i]) continue;
    base_primes.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) base[j] = false;
  }

  std::vector<bool> seg;
  for (std::uint64_t lo = 2; lo <= x; lo += kSegment) {
    std::uint64_t hi = std::min<std::uint64_t>(x, lo + kSegment - 1);
    seg.assign(hi - lo + 1, true);
    for (std::uint64_t p : base_primes) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
      for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = false;
    }
    for (std::uint64_t i = lo; i <= hi; ++i) {
      if (seg[i - lo]) out.primes.push_back(static_cast<std::int64_t>(i));
    }
  }
  return out;
}

std::int64_t pow_mod(std::int64_t base, std::uint64_t exp, std::int64_t m) {
  std::int64_t result = 1 % m;
  std::int64_t b = ((base % m) + m) % m;
  while (exp > 0) {
    if (exp & 1) result = static_cast<std::int64_t>((__int128)result * b % m);
    b = static_cast<std::int64_t>((__int128)b * b % m);
    exp >>= 1;
  }
  return result;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r0 = m, r1 = ((a % m) + m) % m;
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    std::int64_t t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1) return -1;
  return ((t0 % m) + m) % m;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

ModContext::ModContext(std::int64_t p) : p_(p), gen_(0) {
  if (p <= 3) throw std::invalid_argument("ModContext: prime must exceed 3");
  if (p > kContextCap) throw std::invalid_argument("ModContext: prime exceeds 2^24 table cap");
  if (!is_prime(p)) throw std::invalid_argument("ModContext: modulus is not prime");

  qr_.assign(static_cast<std::size_t>(p), -1);
  qr_[0] = 0;
  for (std::int64_t i = 1; i < p; ++i) qr_[static_cast<std::size_t>(i * i % p)] = 1;

  inv_.assign(static_cast<std::size_t>(p), 0);
  inv_[1] = 1;
  for (std::int64_t v = 2; v < p; ++v) {
    inv_[static_cast<std::size_t>(v)] =
        static_cast<std::uint32_t>(p - (p / v) * inv_[static_cast<std::size_t>(p % v)] % p);
  }

  // Distinct prime factors of p-1 by trial division; candidates g = 2, 3, ...
  // are primitive exactly when g^((p-1)/q) != 1 for every factor q.
  std::vector<std::int64_t> factors;
  std::int64_t m = p - 1;
  for (std::int64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) factors.push_back(m);
  for (std::int64_t g = 2; g < p; ++g) {
    bool primitive = true;
    for (std::int64_t q : factors) {
      if (pow_mod(g, static_cast<std::uint64_t>((p - 1) / q), p) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      gen_ = g;
      break;
    }
  }

  log_.assign(static_cast<std::size_t>(p), 0);
  std::int64_t cur = 1;
  for (std::int64_t e = 0; e < p - 1; ++e) {
    log_[static_cast<std::size_t>(cur)] = static_cast<std::uint32_t>(e);
    cur = cur * gen_ % p;
  }
}

std::complex<double> additive_char(std::int64_t m, std::int64_t z) {
  if (m < 2) throw std::invalid_argument("additive_char: modulus must be >= 2");
  std::int64_t r = ((z % m) + m) % m;
  double arg = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(m);
  return {std::cos(arg), std::sin(arg)};
}

std::complex<double> mult_char(const ModContext& ctx, std::int64_t k, std::int64_t x) {
  std::int64_t p = ctx.p();
  std::int64_t r = ((x % p) + p) % p;
  if (r == 0) return {0.0, 0.0};
  std::int64_t e = static_cast<std::int64_t>((__int128)ctx.dlog(r) * (((k % (p - 1)) + (p - 1)) % (p - 1)) % (p - 1));
  return additive_char(p - 1, e);
}

std::vector<std::complex<double>> unit_roots(std::int64_t m) {
  if (m < 1) throw std::invalid_argument("unit_roots: modulus must be >= 1");
  std::vector<std::complex<double>> e(static_cast<std::size_t>(m));
  for (std::int64_t k = 0; k < m; ++k) {
    double arg = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    e[static_cast<std::size_t>(k)] = {std::cos(arg), std::sin(arg)};
  }
  return e;
}

}  // namespace stav
