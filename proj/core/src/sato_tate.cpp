#include "stav/sato_tate.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "stav/errors.hpp"
#include "stav/mod_arith.hpp"
#include "stav/sums.hpp"
#include "stav/util.hpp"

namespace stav {

namespace {

constexpr double kPi = std::numbers::pi;

void check_interval(double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha <= beta && beta <= kPi))
    throw std::invalid_argument("interval endpoints must satisfy 0 <= alpha <= beta <= pi");
}

double st_cdf(double theta) { return theta / kPi - std::sin(2.0 * theta) / (2.0 * kPi); }

// Reduced member of a parameter set, precomputed once per run.
struct Member {
  std::int64_t num = 0;
  std::int64_t den = 0;
};

struct MemberPrep {
  std::vector<Member> members;
  std::int64_t singular = 0;
  std::size_t full_size = 0;
};

MemberPrep prepare_members(const CurveFamily& fam, const PairSet& set) {
  MemberPrep prep;
  prep.full_size = set.size();
  prep.members.reserve(prep.full_size);
  // delta(u/v) = 0 iff the integer form sum c_i u^i v^(d-i) vanishes.
  const IntPoly& delta = fam.delta;
  const int d = delta.degree();
  set.for_each_param([&](std::int64_t num, std::int64_t den) {
    std::int64_t g = std::gcd(num, den);
    std::int64_t nr = num / g, dr = den / g;
    BigInt acc = 0, upow = 1;
    std::vector<BigInt> vpow(static_cast<std::size_t>(d) + 1);
    vpow[0] = 1;
    for (int i = 1; i <= d; ++i) vpow[static_cast<std::size_t>(i)] = vpow[static_cast<std::size_t>(i - 1)] * dr;
    for (int i = 0; i <= d; ++i) {
      acc += delta.coeff(static_cast<std::size_t>(i)) * upow * vpow[static_cast<std::size_t>(d - i)];
      upow *= nr;
    }
    if (acc == 0) {
      ++prep.singular;
      return;
    }
    prep.members.push_back({nr, dr});
  });
  return prep;
}

TraceTable default_tables(const CurveFamily& fam, std::int64_t p) {
  return build_trace_table(fam, p);
}

}  // namespace

double mu_st(double alpha, double beta) {
  check_interval(alpha, beta);
  return (beta - alpha) / kPi - (std::sin(2.0 * beta) - std::sin(2.0 * alpha)) / (2.0 * kPi);
}

STInterval STInterval::make(double alpha, double beta) {
  check_interval(alpha, beta);
  return {alpha, beta, mu_st(alpha, beta)};
}

IntervalCount count_in_interval(std::span<const double> angles, const STInterval& interval,
                                int sigma_orders) {
  IntervalCount out;
  for (double psi : angles) {
    if (psi >= interval.alpha && psi <= interval.beta) ++out.count;
  }
  if (angles.empty()) return out;
  double m = static_cast<double>(angles.size());
  double sigma = sigma_estimate(angles, sigma_orders);
  out.discrepancy_check =
      std::abs(static_cast<double>(out.count) - interval.measure * m) / std::sqrt(m * sigma);
  return out;
}

std::vector<double> sample_st_angles(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double u = unif(rng);
    double lo = 0.0, hi = kPi;
    while (hi - lo > 1e-10) {
      double mid = 0.5 * (lo + hi);
      if (st_cdf(mid) < u)
        lo = mid;
      else
        hi = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

std::int64_t pi_e(const CurveFamily& fam, const BigRat& t, const STInterval& interval,
                  std::int64_t x) {
  if (!fam.nondegenerate) throw FamilyError("pi_e: degenerate family: " + fam.reason);
  if (x < 5) throw std::invalid_argument("pi_e: x must be at least 5");
  if (fam.delta.eval(t) == 0) throw std::invalid_argument("pi_e: delta vanishes at t");

  const BigInt& num = numerator(t);
  const BigInt& den = denominator(t);
  std::int64_t count = 0;
  for (std::int64_t p : sieve_primes(static_cast<std::uint64_t>(x)).primes) {
    if (p <= 3) continue;
    std::int64_t dr = mod_reduce(den, p);
    if (dr == 0) continue;
    std::int64_t w = mod_reduce(num, p) * inv_mod(dr, p) % p;
    std::int64_t a = trace_at(fam, p, w);
    if (a == kBadTrace) continue;
    double psi = frobenius_angle(a, p);
    if (psi >= interval.alpha && psi <= interval.beta) ++count;
  }
  return count;
}

std::string averaged_csv_header() {
  return "family_id,set_kind,set_params,x,alpha,beta,lhs,mu,deviation,prime_count,member_count";
}

std::string averaged_csv_row(const AveragedResult& row) {
  return hex16(row.family_id) + "," + row.set_kind + "," + row.set_params + "," +
         std::to_string(row.x) + "," + format_double(row.interval.alpha) + "," +
         format_double(row.interval.beta) + "," + format_double(row.lhs) + "," +
         format_double(row.mu) + "," + format_double(row.deviation) + "," +
         std::to_string(row.prime_count) + "," + std::to_string(row.member_count);
}

AveragedResult averaged_deviation(const CurveFamily& fam, const PairSet& set,
                                  const STInterval& interval, std::int64_t x,
                                  const AverageOptions& opts) {
  if (!fam.nondegenerate) throw FamilyError("averaged_deviation: degenerate family: " + fam.reason);
  if (x < 5) throw std::invalid_argument("averaged_deviation: x must be at least 5");
  auto tables = opts.tables ? opts.tables : default_tables;

  MemberPrep prep = prepare_members(fam, set);
  PrimeList primes = sieve_primes(static_cast<std::uint64_t>(x));
  std::vector<std::int64_t> ps;
  for (std::int64_t p : primes.primes)
    if (p > 3) ps.push_back(p);

  std::function<std::int64_t(std::size_t)> walk = [&](std::size_t idx) -> std::int64_t {
    std::int64_t p = ps[idx];
    AngleTable angles = AngleTable::from(tables(fam, p));
    std::int64_t c = 0;
    for (const Member& mb : prep.members) {
      std::int64_t dr = mb.den % p;
      if (dr == 0) continue;
      std::int64_t w = (mb.num % p) * inv_mod(dr, p) % p;
      if (!angles.good(w)) continue;
      double psi = angles.psi[static_cast<std::size_t>(w)];
      if (psi >= interval.alpha && psi <= interval.beta) ++c;
    }
    return c;
  };
  std::vector<std::int64_t> per_prime = parallel_index_map<std::int64_t>(ps.size(), opts.jobs, walk);

  std::int64_t total = std::accumulate(per_prime.begin(), per_prime.end(), std::int64_t(0));
  AveragedResult out;
  out.family_id = fam.id;
  out.set_kind = set_kind_name(set.kind);
  out.set_params = set.params;
  out.x = x;
  out.interval = interval;
  out.prime_count = static_cast<std::int64_t>(primes.primes.size());
  out.member_count = static_cast<std::int64_t>(prep.members.size());
  out.lhs = static_cast<double>(total) /
            (static_cast<double>(out.prime_count) * static_cast<double>(prep.full_size));
  out.mu = interval.measure;
  out.deviation = out.lhs - out.mu;
  return out;
}

AveragedStudy::AveragedStudy(const CurveFamily& fam, const PairSet& set, std::int64_t x,
                             int grid, const AverageOptions& opts)
    : family_id_(fam.id), x_(x), grid_(grid) {
  if (!fam.nondegenerate) throw FamilyError("AveragedStudy: degenerate family: " + fam.reason);
  if (grid < 2) throw std::invalid_argument("AveragedStudy: grid must be at least 2");
  if (x < 5) throw std::invalid_argument("AveragedStudy: x must be at least 5");
  auto tables = opts.tables ? opts.tables : default_tables;

  set_kind_ = set_kind_name(set.kind);
  set_params_ = set.params;
  theta_.resize(static_cast<std::size_t>(grid) + 1);
  for (int i = 0; i <= grid; ++i) theta_[static_cast<std::size_t>(i)] = i * kPi / grid;

  MemberPrep prep = prepare_members(fam, set);
  member_count_ = static_cast<std::int64_t>(prep.members.size());
  singular_members_ = prep.singular;
  full_size_ = prep.full_size;

  PrimeList primes = sieve_primes(static_cast<std::uint64_t>(x));
  prime_count_ = static_cast<std::int64_t>(primes.primes.size());
  std::vector<std::int64_t> ps;
  for (std::int64_t p : primes.primes)
    if (p > 3) ps.push_back(p);

  const int g = grid;
  using Histo = std::vector<std::int64_t>;  // g cells then g+1 boundary slots
  std::function<Histo(std::size_t)> walk = [&](std::size_t idx) -> Histo {
    std::int64_t p = ps[idx];
    AngleTable angles = AngleTable::from(tables(fam, p));
    Histo h(static_cast<std::size_t>(2 * g + 1), 0);
    for (const Member& mb : prep.members) {
      std::int64_t dr = mb.den % p;
      if (dr == 0) continue;
      std::int64_t w = (mb.num % p) * inv_mod(dr, p) % p;
      if (!angles.good(w)) continue;
      double psi = angles.psi[static_cast<std::size_t>(w)];
      int b = std::min(g - 1, std::max(0, static_cast<int>(psi * g / kPi)));
      while (b > 0 && psi < theta_[static_cast<std::size_t>(b)]) --b;
      while (b < g - 1 && psi >= theta_[static_cast<std::size_t>(b + 1)]) ++b;
      if (psi == theta_[static_cast<std::size_t>(b)])
        ++h[static_cast<std::size_t>(g + b)];
      else if (psi == theta_[static_cast<std::size_t>(b + 1)])
        ++h[static_cast<std::size_t>(g + b + 1)];
      else
        ++h[static_cast<std::size_t>(b)];
    }
    return h;
  };
  std::vector<Histo> parts = parallel_index_map<Histo>(ps.size(), opts.jobs, walk);

  cells_.assign(static_cast<std::size_t>(g), 0);
  boundary_.assign(static_cast<std::size_t>(g) + 1, 0);
  for (const Histo& h : parts) {
    for (int b = 0; b < g; ++b) cells_[static_cast<std::size_t>(b)] += h[static_cast<std::size_t>(b)];
    for (int b = 0; b <= g; ++b)
      boundary_[static_cast<std::size_t>(b)] += h[static_cast<std::size_t>(g + b)];
  }
}

std::int64_t AveragedStudy::closed_count(int i, int j) const {
  std::int64_t c = 0;
  for (int b = i; b < j; ++b) c += cells_[static_cast<std::size_t>(b)];
  for (int b = i; b <= j; ++b) c += boundary_[static_cast<std::size_t>(b)];
  return c;
}

AveragedResult AveragedStudy::result(int i, int j) const {
  if (!(0 <= i && i < j && j <= grid_))
    throw std::invalid_argument("AveragedStudy: need 0 <= i < j <= grid");
  AveragedResult out;
  out.family_id = family_id_;
  out.set_kind = set_kind_;
  out.set_params = set_params_;
  out.x = x_;
  out.interval = STInterval::make(theta_[static_cast<std::size_t>(i)], theta_[static_cast<std::size_t>(j)]);
  out.prime_count = prime_count_;
  out.member_count = member_count_;
  out.lhs = static_cast<double>(closed_count(i, j)) /
            (static_cast<double>(prime_count_) * static_cast<double>(full_size_));
  out.mu = out.interval.measure;
  out.deviation = out.lhs - out.mu;
  return out;
}

double AveragedStudy::sup_deviation() const {
  double sup = 0.0;
  for (int i = 0; i < grid_; ++i) {
    for (int j = i + 1; j <= grid_; ++j) {
      sup = std::max(sup, std::abs(result(i, j).deviation));
    }
  }
  return sup;
}

double empirical_discrepancy(const CurveFamily& fam, const PairSet& set, std::int64_t x,
                             int grid, const AverageOptions& opts) {
  return AveragedStudy(fam, set, x, grid, opts).sup_deviation();
}

double vertical_discrepancy(const AngleTable& angles, int grid) {
  if (grid < 2) throw std::invalid_argument("vertical_discrepancy: grid must be at least 2");
  std::vector<double> good;
  good.reserve(angles.psi.size());
  for (double psi : angles.psi)
    if (psi >= 0.0) good.push_back(psi);
  if (good.empty()) return 0.0;

  std::vector<double> theta(static_cast<std::size_t>(grid) + 1);
  for (int i = 0; i <= grid; ++i) theta[static_cast<std::size_t>(i)] = i * kPi / grid;
  std::vector<std::int64_t> cells(static_cast<std::size_t>(grid), 0);
  std::vector<std::int64_t> boundary(static_cast<std::size_t>(grid) + 1, 0);
  for (double psi : good) {
    int b = std::min(grid - 1, std::max(0, static_cast<int>(psi * grid / kPi)));
    while (b > 0 && psi < theta[static_cast<std::size_t>(b)]) --b;
    while (b < grid - 1 && psi >= theta[static_cast<std::size_t>(b + 1)]) ++b;
    if (psi == theta[static_cast<std::size_t>(b)])
      ++boundary[static_cast<std::size_t>(b)];
    else if (psi == theta[static_cast<std::size_t>(b + 1)])
      ++boundary[static_cast<std::size_t>(b + 1)];
    else
      ++cells[static_cast<std::size_t>(b)];
  }

  double m = static_cast<double>(good.size());
  double sup = 0.0;
  for (int i = 0; i < grid; ++i) {
    std::int64_t c = 0;
    for (int j = i + 1; j <= grid; ++j) {
      c += cells[static_cast<std::size_t>(j - 1)] + boundary[static_cast<std::size_t>(j - 1)];
      std::int64_t closed = c + boundary[static_cast<std::size_t>(j)];
      double dev = std::abs(static_cast<double>(closed) / m -
                            mu_st(theta[static_cast<std::size_t>(i)], theta[static_cast<std::size_t>(j)]));
      sup = std::max(sup, dev);
    }
  }
  return sup;
}

}  // namespace stav
