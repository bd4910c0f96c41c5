#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace stav {

struct LatticePoint {
  std::int64_t u = 0;
  std::int64_t v = 0;
  bool operator==(const LatticePoint&) const = default;
};

// Convex subset of the box (A, A+T] x (B, B+T], either a convex lattice
// polygon intersected with the box or an arbitrary convex predicate.
class ConvexRegion {
 public:
  // Vertices counterclockwise; collinear runs allowed, reflex turns rejected.
  static ConvexRegion polygon(std::vector<LatticePoint> vertices, std::int64_t A,
                              std::int64_t B, std::int64_t T);
  static ConvexRegion predicate(std::function<bool(std::int64_t, std::int64_t)> member,
                                std::int64_t A, std::int64_t B, std::int64_t T);
  // The full box itself.
  static ConvexRegion box(std::int64_t A, std::int64_t B, std::int64_t T);

  bool contains(std::int64_t u, std::int64_t v) const;
  std::int64_t A() const { return A_; }
  std::int64_t B() const { return B_; }
  std::int64_t T() const { return T_; }
  const std::vector<LatticePoint>& vertices() const { return vertices_; }

 private:
  ConvexRegion() = default;
  std::int64_t A_ = 0, B_ = 0, T_ = 0;
  std::vector<LatticePoint> vertices_;  // empty for predicate-backed regions
  std::function<bool(std::int64_t, std::int64_t)> member_;
};

// Exact enumeration, ordered by u then v.  Each u-column of a convex region is
// a contiguous v-interval: the first member is located by scan, the far edge by
// bisection on the membership predicate.
std::vector<LatticePoint> lattice_points(const ConvexRegion& region);

// Interior + boundary lattice points of a convex lattice polygon via
// Area + B/2 + 1, with the doubled area from the shoelace formula and the
// boundary count from gcds along edges.  Rejects zero-area polygons.
std::int64_t pick_count(const std::vector<LatticePoint>& vertices);

enum class SetKind { Convex, Z, ZStar, Farey, FareyProduct };

const char* set_kind_name(SetKind kind);

// A finite family of formal fractions u/v.  For FareyProduct the members are
// pairwise products r*s with r from `left` and s from `right`, materialized
// lazily through for_each_param.
struct PairSet {
  SetKind kind = SetKind::Z;
  std::int64_t A = 0, B = 0, T = 0;
  std::vector<LatticePoint> pairs;         // all kinds except FareyProduct
  std::vector<LatticePoint> left, right;   // FareyProduct factors (reduced)
  std::string params;                      // printable descriptor

  std::size_t size() const {
    return kind == SetKind::FareyProduct ? left.size() * right.size() : pairs.size();
  }

  // Visits each member once as a (numerator, denominator) pair, not reduced.
  template <typename F>
  void for_each_param(F&& fn) const {
    if (kind == SetKind::FareyProduct) {
      for (const auto& r : left)
        for (const auto& s : right) fn(r.u * s.u, r.v * s.v);
    } else {
      for (const auto& pr : pairs) fn(pr.u, pr.v);
    }
  }
};

// All of (A, A+T] x (B, B+T], exactly T^2 pairs.
PairSet z_set(std::int64_t A, std::int64_t B, std::int64_t T);
// The coprime pairs of the same box.
PairSet z_star_set(std::int64_t A, std::int64_t B, std::int64_t T);
// Coprime pairs of [1, T]^2; cardinality 2 * sum_{k<=T} phi(k) - 1.
PairSet farey_set(std::int64_t T);
// Pairwise products of two reduced-fraction collections.
PairSet farey_product(std::vector<LatticePoint> r, std::vector<LatticePoint> s,
                      std::int64_t T);
// Lattice points of a convex region as a pair set.
PairSet convex_pair_set(const ConvexRegion& region);

std::vector<std::int64_t> totients_upto(std::int64_t n);
std::int64_t farey_size_via_phi(std::int64_t T);

}  // namespace stav
