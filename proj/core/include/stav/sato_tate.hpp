#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stav/curves.hpp"
#include "stav/param_sets.hpp"
#include "stav/poly_family.hpp"

namespace stav {

// mu_ST([a, b]) = (2/pi) int_a^b sin^2 t dt, by the closed form
// (b - a)/pi - (sin 2b - sin 2a)/(2 pi).
double mu_st(double alpha, double beta);

struct STInterval {
  double alpha = 0.0;
  double beta = 0.0;
  double measure = 0.0;
  static STInterval make(double alpha, double beta);  // requires 0 <= a <= b <= pi
};

struct IntervalCount {
  std::int64_t count = 0;
  // |count - mu m| / sqrt(m sigma), the transfer-lemma shape of the error.
  double discrepancy_check = 0.0;
};

// Closed-interval count: angles equal to an endpoint are in.
IntervalCount count_in_interval(std::span<const double> angles, const STInterval& interval,
                                int sigma_orders = 64);

// Draws from mu_ST by bisecting the closed-form CDF to 1e-10.
std::vector<double> sample_st_angles(std::size_t count, std::uint64_t seed);

// Number of primes 3 < p <= x with good reduction at t, p coprime to the
// reduced denominator of t, and Frobenius angle inside the closed interval.
std::int64_t pi_e(const CurveFamily& fam, const BigRat& t, const STInterval& interval,
                  std::int64_t x);

struct AverageOptions {
  int jobs = 1;
  // Table provider; defaults to building in-process.  The harness plugs the
  // disk cache in here.
  std::function<TraceTable(const CurveFamily&, std::int64_t)> tables;
};

struct AveragedResult {
  std::uint64_t family_id = 0;
  std::string set_kind;
  std::string set_params;
  std::int64_t x = 0;
  STInterval interval;
  double lhs = 0.0;
  double mu = 0.0;
  double deviation = 0.0;
  std::int64_t prime_count = 0;   // pi(x), all primes up to x
  std::int64_t member_count = 0;  // members with delta(param) != 0
};

std::string averaged_csv_header();
std::string averaged_csv_row(const AveragedResult& row);

// Average of per-member interval counts over primes 3 < p <= x, normalized by
// pi(x) times the full set size, aggregated one prime at a time: each prime's
// angle table is walked once over the whole membership.  Members with
// delta(param) = 0 are excluded exactly; a member contributes nothing at
// primes dividing its reduced denominator.
AveragedResult averaged_deviation(const CurveFamily& fam, const PairSet& set,
                                  const STInterval& interval, std::int64_t x,
                                  const AverageOptions& opts = {});

// One pass over (primes, members) that serves every grid interval afterwards.
// Counts are kept per grid cell plus exact tie counts at the grid angles, so
// closed-interval queries reproduce direct endpoint comparisons bit for bit.
class AveragedStudy {
 public:
  AveragedStudy(const CurveFamily& fam, const PairSet& set, std::int64_t x, int grid,
                const AverageOptions& opts = {});

  // Interval [i pi/g, j pi/g], 0 <= i < j <= grid.
  AveragedResult result(int i, int j) const;
  double sup_deviation() const;
  std::int64_t prime_count() const { return prime_count_; }
  std::int64_t member_count() const { return member_count_; }
  std::int64_t singular_members() const { return singular_members_; }
  int grid() const { return grid_; }

 private:
  std::int64_t closed_count(int i, int j) const;

  std::uint64_t family_id_ = 0;
  std::string set_kind_, set_params_;
  std::int64_t x_ = 0;
  int grid_ = 0;
  std::int64_t prime_count_ = 0;
  std::int64_t member_count_ = 0;
  std::int64_t singular_members_ = 0;
  std::size_t full_size_ = 0;
  std::vector<double> theta_;
  std::vector<std::int64_t> cells_;       // angles strictly inside a grid cell
  std::vector<std::int64_t> boundary_;    // angles exactly at a grid angle
};

// sup over grid intervals of |count/(pi(x) #set) - mu|; grid >= 2.
double empirical_discrepancy(const CurveFamily& fam, const PairSet& set, std::int64_t x,
                             int grid, const AverageOptions& opts = {});

// Same sup-statistic for the angles of one prime's table, normalized by the
// number of good fibers.
double vertical_discrepancy(const AngleTable& angles, int grid);

}  // namespace stav
