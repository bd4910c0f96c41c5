#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

#include "stav/mod_arith.hpp"

using namespace stav;

namespace {

bool slow_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("sieve matches trial division") {
  PrimeList small = sieve_primes(100);
  CHECK(small.bound == 100);
  CHECK(small.primes.size() == 25);
  CHECK(small.primes.front() == 2);
  CHECK(small.primes.back() == 97);
  for (std::int64_t p : small.primes) CHECK(slow_prime(p));

  // every prime present, nothing extra
  std::set<std::int64_t> got(small.primes.begin(), small.primes.end());
  for (std::int64_t n = 2; n <= 100; ++n) CHECK(got.count(n) == (slow_prime(n) ? 1u : 0u));

  CHECK(sieve_primes(2).primes.size() == 1);
  CHECK(sieve_primes(3).primes.size() == 2);
  CHECK(sieve_primes(1000).primes.size() == 168);
  CHECK(sieve_primes(10000).primes.size() == 1229);
  CHECK_THROWS_AS(sieve_primes(1), std::invalid_argument);
}

TEST_CASE("sieve across segment boundaries") {
  // the segment size is 2^16; straddle it
  PrimeList big = sieve_primes(100000);
  CHECK(big.primes.size() == 9592);
  std::set<std::int64_t> got(big.primes.begin(), big.primes.end());
  for (std::int64_t n = 65520; n <= 65550; ++n) CHECK(got.count(n) == (slow_prime(n) ? 1u : 0u));
}

TEST_CASE("pow_mod and inv_mod") {
  CHECK(pow_mod(2, 10, 1000) == 24);
  CHECK(pow_mod(5, 0, 7) == 1);
  CHECK(pow_mod(0, 5, 7) == 0);
  // Fermat: a^(p-1) = 1 mod p
  for (std::int64_t p : {5, 97, 10007}) {
    for (std::int64_t a = 1; a < 20; ++a) CHECK(pow_mod(a % p == 0 ? 1 : a, p - 1, p) == 1);
  }
  // large modulus exercises the 128-bit product path
  std::int64_t m = 1000000007;
  CHECK(pow_mod(999999999, 123456789, m) == pow_mod(pow_mod(999999999, 3, m), 41152263, m));

  CHECK(inv_mod(2, 5) == 3);
  CHECK(inv_mod(1, 2) == 1);
  CHECK(inv_mod(4, 8) == -1);
  CHECK(inv_mod(6, 9) == -1);
  for (std::int64_t mm : {7, 12, 97, 1000}) {
    for (std::int64_t a = 1; a < mm; ++a) {
      std::int64_t iv = inv_mod(a, mm);
      if (std::gcd(a, mm) == 1) {
        CHECK(iv >= 1);
        CHECK(a * iv % mm == 1);
      } else {
        CHECK(iv == -1);
      }
    }
  }
}

TEST_CASE("is_prime") {
  for (std::int64_t n = 0; n <= 500; ++n) CHECK(is_prime(n) == slow_prime(n));
  CHECK(is_prime(10007));
  CHECK_FALSE(is_prime(10007ll * 10009ll));
}

TEST_CASE("ModContext rejects non-usable moduli") {
  CHECK_THROWS_AS(ModContext(2), std::invalid_argument);
  CHECK_THROWS_AS(ModContext(3), std::invalid_argument);
  CHECK_THROWS_AS(ModContext(4), std::invalid_argument);
  CHECK_THROWS_AS(ModContext(9), std::invalid_argument);
  CHECK_THROWS_AS(ModContext((1 << 24) + 1), std::invalid_argument);
}

TEST_CASE("ModContext tables at p = 5") {
  ModContext ctx(5);
  CHECK(ctx.p() == 5);
  CHECK(ctx.qr(0) == 0);
  CHECK(ctx.qr(1) == 1);
  CHECK(ctx.qr(2) == -1);
  CHECK(ctx.qr(3) == -1);
  CHECK(ctx.qr(4) == 1);
  CHECK(ctx.inv(1) == 1);
  CHECK(ctx.inv(2) == 3);
  CHECK(ctx.inv(3) == 2);
  CHECK(ctx.inv(4) == 4);
  CHECK(ctx.generator() == 2);
}

TEST_CASE("ModContext generator and discrete log") {
  CHECK(ModContext(7).generator() == 3);
  for (std::int64_t p : {5, 7, 101, 499}) {
    ModContext ctx(p);
    std::int64_t g = ctx.generator();
    // primitive: the powers hit every unit exactly once
    std::set<std::int64_t> seen;
    std::int64_t pw = 1;
    for (std::int64_t e = 0; e < p - 1; ++e) {
      seen.insert(pw);
      pw = pw * g % p;
    }
    CHECK(static_cast<std::int64_t>(seen.size()) == p - 1);
    for (std::int64_t x = 1; x < p; ++x) {
      CHECK(pow_mod(g, static_cast<std::uint64_t>(ctx.dlog(x)), p) == x);
      CHECK(ctx.inv(x) * x % p == 1);
      // Euler criterion ties qr to dlog parity
      CHECK(ctx.qr(x) == (ctx.dlog(x) % 2 == 0 ? 1 : -1));
    }
  }
}

TEST_CASE("additive characters") {
  CHECK(additive_char(8, 2).real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(additive_char(8, 2).imag() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(additive_char(5, 7) == additive_char(5, 2));
  CHECK(std::abs(additive_char(12, -1) - std::conj(additive_char(12, 1))) < 1e-15);
  CHECK(additive_char(6, 0) == std::complex<double>(1.0, 0.0));
  CHECK_THROWS_AS(additive_char(1, 0), std::invalid_argument);

  for (std::int64_t m : {2, 5, 8, 12}) {
    std::complex<double> s = 0.0;
    for (std::int64_t z = 0; z < m; ++z) s += additive_char(m, z);
    CHECK(std::abs(s) < 1e-12);
  }
}

TEST_CASE("multiplicative characters") {
  ModContext ctx(5);
  CHECK(mult_char(ctx, 1, 0) == std::complex<double>(0.0, 0.0));
  CHECK(mult_char(ctx, 0, 3) == std::complex<double>(1.0, 0.0));
  // dlog_2(4) = 2, so chi(4) = e_4(2) = -1
  CHECK(mult_char(ctx, 1, 4).real() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(mult_char(ctx, 1, 4).imag()) < 1e-15);

  for (std::int64_t p : {7, 101}) {
    ModContext c(p);
    for (std::int64_t k : {1, 2, 5}) {
      for (std::int64_t x = 1; x < p; ++x) {
        CHECK(std::abs(std::abs(mult_char(c, k, x)) - 1.0) < 1e-12);
        for (std::int64_t y = 1; y < p; ++y) {
          if ((x * 31 + y * 17) % 13 != 0) continue;  // thin the quadratic loop
          CHECK(std::abs(mult_char(c, k, x * y % p) - mult_char(c, k, x) * mult_char(c, k, y)) <
                1e-12);
        }
      }
      // orthogonality: sum over units vanishes for k != 0
      std::complex<double> s = 0.0;
      for (std::int64_t x = 1; x < p; ++x) s += mult_char(c, k, x);
      CHECK(std::abs(s) < 1e-10);
    }
  }
}

TEST_CASE("unit root table agrees with additive_char") {
  for (std::int64_t m : {2, 7, 16}) {
    auto roots = unit_roots(m);
    CHECK(roots.size() == static_cast<std::size_t>(m));
    for (std::int64_t k = 0; k < m; ++k) CHECK(std::abs(roots[static_cast<std::size_t>(k)] - additive_char(m, k)) < 1e-15);
  }
  auto one = unit_roots(1);
  CHECK(one.size() == 1);
  CHECK(std::abs(one[0] - std::complex<double>(1.0, 0.0)) < 1e-15);
}
