#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "stav/curves.hpp"
#include "stav/errors.hpp"
#include "stav/mod_arith.hpp"
#include "stav/sato_tate.hpp"
#include "stav/sums.hpp"

using namespace stav;

namespace {

constexpr double kPi = std::numbers::pi;

CurveFamily zfam() { return CurveFamily::make(IntPoly::from_ints({0, 1}), IntPoly::from_ints({1})); }

double st_density(double t) {
  double s = std::sin(t);
  return 2.0 / kPi * s * s;
}

double simpson(double a, double b) {
  return (b - a) / 6.0 * (st_density(a) + 4.0 * st_density(0.5 * (a + b)) + st_density(b));
}

double adaptive(double a, double b, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double left = simpson(a, m), right = simpson(m, b);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(a, m, left, 0.5 * tol, depth - 1) +
         adaptive(m, b, right, 0.5 * tol, depth - 1);
}

double quad_mu(double a, double b) { return adaptive(a, b, simpson(a, b), 1e-14, 40); }

// From-scratch averaged count: reduce each member, walk primes, recount.
double naive_lhs(const CurveFamily& fam, const PairSet& set, double alpha, double beta,
                 std::int64_t x) {
  std::int64_t total = 0;
  std::int64_t primes_all = 0;
  for (std::int64_t p : sieve_primes(static_cast<std::uint64_t>(x)).primes) {
    ++primes_all;
    if (p <= 3) continue;
    set.for_each_param([&](std::int64_t num, std::int64_t den) {
      std::int64_t g = std::gcd(num, den);
      std::int64_t nr = num / g, dr = den / g;
      BigRat t = make_rational(nr, dr);
      if (fam.delta.eval(t) == 0) return;
      if (dr % p == 0) return;
      std::int64_t w = (nr % p) * inv_mod(dr % p, p) % p;
      std::int64_t a = trace_at(fam, p, w);
      if (a == kBadTrace) return;
      double psi = frobenius_angle(a, p);
      if (psi >= alpha && psi <= beta) ++total;
    });
  }
  return static_cast<double>(total) /
         (static_cast<double>(primes_all) * static_cast<double>(set.size()));
}

}  // namespace

TEST_CASE("equilibrium measure closed form") {
  CHECK(std::abs(mu_st(0.0, kPi) - 1.0) <= 1e-15);
  CHECK(mu_st(0.3, 0.3) == 0.0);
  CHECK(mu_st(0.0, kPi / 2) == doctest::Approx(0.5).epsilon(1e-14));

  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> unif(0.0, kPi);
  for (int i = 0; i < 100; ++i) {
    double a = unif(rng), b = unif(rng);
    if (a > b) std::swap(a, b);
    CHECK(std::abs(mu_st(a, b) - quad_mu(a, b)) < 1e-12);
    double c = unif(rng);
    double lo = std::min({a, b, c}), mid = std::max(std::min(a, b), std::min(std::max(a, b), c));
    double hi = std::max({a, b, c});
    CHECK(std::abs(mu_st(lo, mid) + mu_st(mid, hi) - mu_st(lo, hi)) < 1e-15);
  }

  CHECK_THROWS_AS(mu_st(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(mu_st(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(mu_st(1.0, 4.0), std::invalid_argument);
}

TEST_CASE("interval construction") {
  STInterval iv = STInterval::make(0.5, 2.0);
  CHECK(iv.alpha == 0.5);
  CHECK(iv.beta == 2.0);
  CHECK(iv.measure == mu_st(0.5, 2.0));
  CHECK_THROWS_AS(STInterval::make(2.0, 0.5), std::invalid_argument);
}

TEST_CASE("interval counting is closed at both endpoints") {
  std::vector<double> angles = {0.5, 1.0, 1.5, 2.0};
  CHECK(count_in_interval(angles, STInterval::make(0.5, 1.0)).count == 2);
  CHECK(count_in_interval(angles, STInterval::make(0.6, 0.9)).count == 0);
  CHECK(count_in_interval(angles, STInterval::make(0.0, kPi)).count == 4);
  CHECK(count_in_interval({}, STInterval::make(0.0, 1.0)).count == 0);

  STInterval iv = STInterval::make(0.5, 1.5);
  auto c = count_in_interval(angles, iv);
  CHECK(c.count == 3);
  double sigma = sigma_estimate(angles, 64);
  double want = std::abs(3.0 - iv.measure * 4.0) / std::sqrt(4.0 * sigma);
  CHECK(c.discrepancy_check == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("sampling follows the measure") {
  auto a = sample_st_angles(20000, 99);
  auto b = sample_st_angles(20000, 99);
  CHECK(a == b);
  CHECK(sample_st_angles(100, 100) != a);

  for (double psi : a) {
    CHECK(psi >= 0.0);
    CHECK(psi <= kPi);
  }
  double sup = 0.0;
  std::vector<double> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 1; i <= 64; ++i) {
    double theta = i * kPi / 65.0;
    auto below = std::upper_bound(sorted.begin(), sorted.end(), theta) - sorted.begin();
    sup = std::max(sup, std::abs(static_cast<double>(below) / 20000.0 - mu_st(0.0, theta)));
  }
  CHECK(sup < 0.025);
}

TEST_CASE("per-member prime counting") {
  CurveFamily fam = zfam();
  STInterval iv = STInterval::make(0.4, 2.6);

  std::int64_t direct = 0;
  for (std::int64_t p : {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
    std::int64_t a = trace_at(fam, p, 1);
    if (a == kBadTrace) continue;
    double psi = frobenius_angle(a, p);
    if (psi >= iv.alpha && psi <= iv.beta) ++direct;
  }
  CHECK(pi_e(fam, BigRat(1), iv, 50) == direct);

  // 1/3 reduces through inverses per prime; count it the slow way too
  std::int64_t direct13 = 0;
  for (std::int64_t p : {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
    std::int64_t w = 1 * inv_mod(3 % p, p) % p;
    std::int64_t a = trace_at(fam, p, w);
    if (a == kBadTrace) continue;
    double psi = frobenius_angle(a, p);
    if (psi >= iv.alpha && psi <= iv.beta) ++direct13;
  }
  CHECK(pi_e(fam, make_rational(1, 3), iv, 50) == direct13);

  CHECK_THROWS_AS(pi_e(CurveFamily::make(IntPoly(), IntPoly()), BigRat(1), iv, 50), FamilyError);
  CHECK_THROWS_AS(pi_e(fam, BigRat(1), iv, 4), std::invalid_argument);
  // delta(t) = 0: family f = Z, g = Z is singular at t = 0
  CurveFamily zz = CurveFamily::make(IntPoly::from_ints({0, 1}), IntPoly::from_ints({0, 1}));
  REQUIRE(zz.nondegenerate);
  CHECK_THROWS_AS(pi_e(zz, BigRat(0), iv, 50), std::invalid_argument);
}

TEST_CASE("averaged deviation equals a from-scratch recount") {
  CurveFamily fam = zfam();
  PairSet set = farey_set(4);
  STInterval iv = STInterval::make(0.3, 2.5);
  AveragedResult got = averaged_deviation(fam, set, iv, 60);

  CHECK(got.lhs == naive_lhs(fam, set, 0.3, 2.5, 60));
  CHECK(got.prime_count == 17);  // pi(60), the 2 and 3 stay in the normalizer
  CHECK(got.member_count == 11);
  CHECK(got.mu == mu_st(0.3, 2.5));
  CHECK(got.deviation == got.lhs - got.mu);
  CHECK(got.set_kind == "FAREY");
  CHECK(got.x == 60);
  CHECK(got.family_id == fam.id);
}

TEST_CASE("singular members are excluded exactly") {
  // f = Z, g = Z: delta = -16 Z^2 (4Z + 27) vanishes at t = 0 and t = -27/4
  CurveFamily fam = CurveFamily::make(IntPoly::from_ints({0, 1}), IntPoly::from_ints({0, 1}));
  REQUIRE(fam.nondegenerate);

  PairSet set;
  set.kind = SetKind::Z;
  set.T = 3;
  set.params = "hand";
  set.pairs = {{1, 1}, {0, 1}, {-27, 4}, {-54, 8}, {2, 1}};
  AveragedResult got = averaged_deviation(fam, set, STInterval::make(0.0, kPi), 30);
  CHECK(got.member_count == 2);  // 0/1, -27/4 and the unreduced -54/8 all drop

  // the survivors normalize by the full set size, so lhs stays below 2/5
  CHECK(got.lhs <= 2.0 / 5.0 + 1e-12);
}

TEST_CASE("grid study reproduces direct interval results exactly") {
  CurveFamily fam = zfam();
  PairSet set = farey_set(5);
  const int grid = 8;
  AveragedStudy study(fam, set, 60, grid);

  for (int i = 0; i < grid; ++i) {
    for (int j = i + 1; j <= grid; ++j) {
      STInterval iv = STInterval::make(i * kPi / grid, j * kPi / grid);
      AveragedResult direct = averaged_deviation(fam, set, iv, 60);
      AveragedResult fast = study.result(i, j);
      CHECK(fast.lhs == direct.lhs);
      CHECK(fast.mu == direct.mu);
      CHECK(fast.deviation == direct.deviation);
      CHECK(fast.interval.alpha == direct.interval.alpha);
      CHECK(fast.interval.beta == direct.interval.beta);
    }
  }
  CHECK(study.prime_count() == 17);
  CHECK(study.grid() == grid);
  CHECK_THROWS_AS(study.result(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(study.result(0, grid + 1), std::invalid_argument);

  double sup = 0.0;
  for (int i = 0; i < grid; ++i)
    for (int j = i + 1; j <= grid; ++j)
      sup = std::max(sup, std::abs(study.result(i, j).deviation));
  CHECK(study.sup_deviation() == sup);
  CHECK(empirical_discrepancy(fam, set, 60, grid) == sup);

  // whole-line interval can never overshoot full mass
  CHECK(study.result(0, grid).lhs <= 1.0 + 1e-15);
}

TEST_CASE("parallel study matches serial study") {
  CurveFamily fam = zfam();
  PairSet set = farey_set(4);
  AverageOptions serial, parallel;
  parallel.jobs = 4;
  AveragedStudy a(fam, set, 80, 6, serial);
  AveragedStudy b(fam, set, 80, 6, parallel);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j <= 6; ++j) CHECK(a.result(i, j).lhs == b.result(i, j).lhs);
}

TEST_CASE("study validation") {
  CurveFamily fam = zfam();
  PairSet set = farey_set(3);
  CHECK_THROWS_AS(AveragedStudy(fam, set, 60, 1), std::invalid_argument);
  CHECK_THROWS_AS(AveragedStudy(fam, set, 4, 4), std::invalid_argument);
  CHECK_THROWS_AS(AveragedStudy(CurveFamily::make(IntPoly(), IntPoly()), set, 60, 4), FamilyError);
}

TEST_CASE("vertical discrepancy equals the direct sup") {
  CurveFamily fam = zfam();
  AngleTable angles = AngleTable::from(build_trace_table(fam, 101));
  const int grid = 16;

  std::vector<double> good;
  for (double psi : angles.psi)
    if (psi >= 0.0) good.push_back(psi);

  double sup = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = i + 1; j <= grid; ++j) {
      double a = i * kPi / grid, b = j * kPi / grid;
      std::int64_t c = 0;
      for (double psi : good)
        if (psi >= a && psi <= b) ++c;
      sup = std::max(sup, std::abs(static_cast<double>(c) / good.size() - mu_st(a, b)));
    }
  }
  CHECK(vertical_discrepancy(angles, grid) == sup);
  CHECK_THROWS_AS(vertical_discrepancy(angles, 1), std::invalid_argument);
}

TEST_CASE("csv row shape") {
  AveragedResult row;
  row.family_id = 0xabcd;
  row.set_kind = "FAREY";
  row.set_params = "T=4";
  row.x = 60;
  row.interval = STInterval::make(0.0, kPi);
  row.lhs = 0.5;
  row.mu = 1.0;
  row.deviation = -0.5;
  row.prime_count = 17;
  row.member_count = 11;
  CHECK(averaged_csv_header() ==
        "family_id,set_kind,set_params,x,alpha,beta,lhs,mu,deviation,prime_count,member_count");
  CHECK(averaged_csv_row(row) == "000000000000abcd,FAREY,T=4,60,0,3.14159265359,0.5,1,-0.5,17,11");
}
