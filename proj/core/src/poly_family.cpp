#include "stav/poly_family.hpp"

#include <sstream>
#include <stdexcept>

#include "stav/util.hpp"

namespace stav {

namespace {
const BigInt kZero = 0;
}

IntPoly::IntPoly(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPoly IntPoly::constant(BigInt c) {
  std::vector<BigInt> v;
  if (c != 0) v.push_back(std::move(c));
  return IntPoly(std::move(v));
}

IntPoly IntPoly::from_ints(const std::vector<long long>& coeffs) {
  std::vector<BigInt> v(coeffs.begin(), coeffs.end());
  return IntPoly(std::move(v));
}

const BigInt& IntPoly::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : kZero;
}

IntPoly IntPoly::derivative() const {
  if (coeffs_.size() <= 1) return IntPoly();
  std::vector<BigInt> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = BigInt(i) * coeffs_[i];
  return IntPoly(std::move(d));
}

BigRat IntPoly::eval(const BigRat& t) const {
  if (coeffs_.empty()) return BigRat(0);
  const BigInt u = numerator(t);
  const BigInt v = denominator(t);
  // sum c_i u^i v^(d-i), all integer, over v^d; cpp_rational reduces.
  BigInt num = 0;
  BigInt upow = 1;
  const int d = degree();
  std::vector<BigInt> vpow(d + 1);
  vpow[0] = 1;
  for (int i = 1; i <= d; ++i) vpow[i] = vpow[i - 1] * v;
  for (int i = 0; i <= d; ++i) {
    num += coeffs_[i] * upow * vpow[d - i];
    upow *= u;
  }
  return BigRat(num, vpow[d]);
}

std::int64_t IntPoly::eval_mod(std::int64_t w, std::int64_t m) const {
  if (m < 2) throw std::invalid_argument("eval_mod: modulus must be >= 2");
  std::int64_t x = ((w % m) + m) % m;
  std::int64_t acc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    acc = (acc * x + mod_reduce(coeffs_[i], m)) % m;
  }
  return acc;
}

std::string IntPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) os << ",";
    os << coeffs_[i];
  }
  return os.str();
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<BigInt> v(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) + b.coeff(i);
  return IntPoly(std::move(v));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
  std::vector<BigInt> v(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) - b.coeff(i);
  return IntPoly(std::move(v));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return IntPoly();
  std::vector<BigInt> v(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return IntPoly(std::move(v));
}

IntPoly operator*(const BigInt& c, const IntPoly& a) {
  std::vector<BigInt> v(a.coeffs_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * a.coeffs_[i];
  return IntPoly(std::move(v));
}

IntPoly discriminant_poly(const IntPoly& f, const IntPoly& g) {
  IntPoly f3 = f * f * f;
  IntPoly g2 = g * g;
  return BigInt(-16) * (BigInt(4) * f3 + BigInt(27) * g2);
}

NondegReport check_nondegenerate(const IntPoly& f, const IntPoly& g) {
  IntPoly delta = discriminant_poly(f, g);
  if (delta.is_zero()) return {false, "delta_zero"};
  if (f.is_zero()) return {false, "j_constant"};
  IntPoly f3 = f * f * f;
  IntPoly wronskian = f3.derivative() * delta - f3 * delta.derivative();
  if (wronskian.is_zero()) return {false, "j_constant"};
  return {true, ""};
}

CurveFamily CurveFamily::make(IntPoly f, IntPoly g) {
  CurveFamily fam;
  NondegReport rep = check_nondegenerate(f, g);
  fam.delta = discriminant_poly(f, g);
  fam.f = std::move(f);
  fam.g = std::move(g);
  fam.nondegenerate = rep.nondegenerate;
  fam.reason = rep.reason;
  std::string key = "f[" + fam.f.to_string() + "];g[" + fam.g.to_string() + "]";
  fam.id = fnv1a(key);
  return fam;
}

BigRat make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
  // cpp_rational reduces to lowest terms but refuses negative denominators.
  if (den < 0) return BigRat(-num, -den);
  return BigRat(num, den);
}

bool divides(std::int64_t p, const BigInt& n) { return mod_reduce(n, p) == 0; }

std::int64_t mod_reduce(const BigInt& n, std::int64_t m) {
  if (m < 2) throw std::invalid_argument("mod_reduce: modulus must be >= 2");
  BigInt r = n % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

}  // namespace stav
