#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace stav {

using BigInt = boost::multiprecision::cpp_int;
// Always kept canonical: lowest terms, positive denominator.
using BigRat = boost::multiprecision::cpp_rational;

// Integer-coefficient polynomial, coefficients stored ascending by degree.
// Trailing zero coefficients are stripped on construction; the zero polynomial
// has an empty coefficient vector and degree -1.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> coeffs);
  static IntPoly constant(BigInt c);
  static IntPoly from_ints(const std::vector<long long>& coeffs);

  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const BigInt& coeff(std::size_t i) const;
  const std::vector<BigInt>& coeffs() const { return coeffs_; }

  IntPoly derivative() const;

  // Exact evaluation at a rational point: sum c_i u^i v^(d-i) over v^d,
  // returned reduced.
  BigRat eval(const BigRat& t) const;

  // Horner evaluation modulo m >= 2; result in [0, m).
  std::int64_t eval_mod(std::int64_t w, std::int64_t m) const;

  std::string to_string() const;  // coefficients ascending, comma-separated

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const BigInt& c, const IntPoly& a);
  bool operator==(const IntPoly& other) const = default;

 private:
  std::vector<BigInt> coeffs_;
};

// delta(Z) = -16 (4 f^3 + 27 g^2)
IntPoly discriminant_poly(const IntPoly& f, const IntPoly& g);

struct NondegReport {
  bool nondegenerate = false;
  std::string reason;  // "", "delta_zero" or "j_constant"
};

// A family Y^2 = X^3 + f(Z) X + g(Z) is usable when delta is not identically
// zero and the j-invariant -1728 (4f)^3 / delta is a non-constant function of
// Z.  j is constant exactly when f^3 and delta are proportional, which the
// Wronskian-style identity (f^3)' delta - f^3 delta' == 0 detects without any
// factorization; f == 0 forces j == 0 identically.
NondegReport check_nondegenerate(const IntPoly& f, const IntPoly& g);

struct CurveFamily {
  IntPoly f, g, delta;
  bool nondegenerate = false;
  std::string reason;
  std::uint64_t id = 0;  // content hash of (f, g); keys the trace cache

  static CurveFamily make(IntPoly f, IntPoly g);
};

// Reduced rational from a possibly unreduced pair; den must be nonzero.
BigRat make_rational(const BigInt& num, const BigInt& den);

bool divides(std::int64_t p, const BigInt& n);
// Value of n mod m in [0, m).
std::int64_t mod_reduce(const BigInt& n, std::int64_t m);

}  // namespace stav
