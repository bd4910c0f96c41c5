#include "stav/param_sets.hpp"

#include <numeric>
#include <stdexcept>

namespace stav {

namespace {

std::int64_t cross(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
  return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
}

void check_box(std::int64_t A, std::int64_t B, std::int64_t T) {
  if (A < 0 || B < 0) throw std::invalid_argument("box offsets must be non-negative");
  if (T < 1) throw std::invalid_argument("box side must be positive");
}

// Convexity of the vertex chain: every turn counterclockwise or straight.
void check_convex_ccw(const std::vector<LatticePoint>& v) {
  if (v.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t c = cross(v[i], v[(i + 1) % n], v[(i + 2) % n]);
    if (c < 0) throw std::invalid_argument("polygon is not convex counterclockwise");
  }
}

std::int64_t doubled_area(const std::vector<LatticePoint>& v) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    s += a.u * b.v - b.u * a.v;
  }
  return s;
}

bool in_polygon(const std::vector<LatticePoint>& v, std::int64_t u, std::int64_t w) {
  LatticePoint q{u, w};
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (cross(v[i], v[(i + 1) % v.size()], q) < 0) return false;
  }
  return true;
}

}  // namespace

ConvexRegion ConvexRegion::polygon(std::vector<LatticePoint> vertices, std::int64_t A,
                                   std::int64_t B, std::int64_t T) {
  check_box(A, B, T);
  check_convex_ccw(vertices);
  if (doubled_area(vertices) <= 0)
    throw std::invalid_argument("polygon must have positive area and counterclockwise order");
  ConvexRegion r;
  r.A_ = A;
  r.B_ = B;
  r.T_ = T;
  r.vertices_ = std::move(vertices);
  return r;
}

ConvexRegion ConvexRegion::predicate(std::function<bool(std::int64_t, std::int64_t)> member,
                                     std::int64_t A, std::int64_t B, std::int64_t T) {
  check_box(A, B, T);
  if (!member) throw std::invalid_argument("predicate region needs a membership function");
  ConvexRegion r;
  r.A_ = A;
  r.B_ = B;
  r.T_ = T;
  r.member_ = std::move(member);
  return r;
}

ConvexRegion ConvexRegion::box(std::int64_t A, std::int64_t B, std::int64_t T) {
  return predicate([](std::int64_t, std::int64_t) { return true; }, A, B, T);
}

bool ConvexRegion::contains(std::int64_t u, std::int64_t v) const {
  if (u <= A_ || u > A_ + T_ || v <= B_ || v > B_ + T_) return false;
  if (!vertices_.empty()) return in_polygon(vertices_, u, v);
  return member_(u, v);
}

std::vector<LatticePoint> lattice_points(const ConvexRegion& region) {
  std::vector<LatticePoint> out;
  const std::int64_t lo = region.B() + 1;
  const std::int64_t hi = region.B() + region.T();
  for (std::int64_t u = region.A() + 1; u <= region.A() + region.T(); ++u) {
    std::int64_t first = lo;
    while (first <= hi && !region.contains(u, first)) ++first;
    if (first > hi) continue;
    // Column membership is an interval; bisect for its upper end.
    std::int64_t a = first, b = hi;
    while (a < b) {
      std::int64_t mid = a + (b - a + 1) / 2;
      if (region.contains(u, mid))
        a = mid;
      else
        b = mid - 1;
    }
    for (std::int64_t v = first; v <= a; ++v) out.push_back({u, v});
  }
  return out;
}

std::int64_t pick_count(const std::vector<LatticePoint>& vertices) {
  check_convex_ccw(vertices);
  std::int64_t twice_area = doubled_area(vertices);
  if (twice_area <= 0) throw std::invalid_argument("polygon must have positive area");
  std::int64_t boundary = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& a = vertices[i];
    const auto& b = vertices[(i + 1) % vertices.size()];
    boundary += std::gcd(std::abs(b.u - a.u), std::abs(b.v - a.v));
  }
  // Pick: Area = I + B/2 - 1, so I + B = (2 Area + B) / 2 + 1.
  return (twice_area + boundary) / 2 + 1;
}

const char* set_kind_name(SetKind kind) {
  switch (kind) {
    case SetKind::Convex: return "CONVEX";
    case SetKind::Z: return "Z";
    case SetKind::ZStar: return "ZSTAR";
    case SetKind::Farey: return "FAREY";
    case SetKind::FareyProduct: return "FAREY_PRODUCT";
  }
  return "?";
}

PairSet z_set(std::int64_t A, std::int64_t B, std::int64_t T) {
  check_box(A, B, T);
  PairSet s;
  s.kind = SetKind::Z;
  s.A = A;
  s.B = B;
  s.T = T;
  s.pairs.reserve(static_cast<std::size_t>(T * T));
  for (std::int64_t u = A + 1; u <= A + T; ++u)
    for (std::int64_t v = B + 1; v <= B + T; ++v) s.pairs.push_back({u, v});
  s.params = "A=" + std::to_string(A) + ";B=" + std::to_string(B) + ";T=" + std::to_string(T);
  return s;
}

PairSet z_star_set(std::int64_t A, std::int64_t B, std::int64_t T) {
  check_box(A, B, T);
  PairSet s;
  s.kind = SetKind::ZStar;
  s.A = A;
  s.B = B;
  s.T = T;
  for (std::int64_t u = A + 1; u <= A + T; ++u)
    for (std::int64_t v = B + 1; v <= B + T; ++v)
      if (std::gcd(u, v) == 1) s.pairs.push_back({u, v});
  s.params = "A=" + std::to_string(A) + ";B=" + std::to_string(B) + ";T=" + std::to_string(T);
  return s;
}

PairSet farey_set(std::int64_t T) {
  if (T < 1) throw std::invalid_argument("farey_set: T must be positive");
  PairSet s;
  s.kind = SetKind::Farey;
  s.T = T;
  for (std::int64_t u = 1; u <= T; ++u)
    for (std::int64_t v = 1; v <= T; ++v)
      if (std::gcd(u, v) == 1) s.pairs.push_back({u, v});
  s.params = "T=" + std::to_string(T);
  return s;
}

PairSet farey_product(std::vector<LatticePoint> r, std::vector<LatticePoint> s,
                      std::int64_t T) {
  if (r.empty() || s.empty()) throw std::invalid_argument("farey_product: factors must be non-empty");
  PairSet out;
  out.kind = SetKind::FareyProduct;
  out.T = T;
  out.params = "T=" + std::to_string(T) + ";R=" + std::to_string(r.size()) +
               ";S=" + std::to_string(s.size());
  out.left = std::move(r);
  out.right = std::move(s);
  return out;
}

PairSet convex_pair_set(const ConvexRegion& region) {
  PairSet s;
  s.kind = SetKind::Convex;
  s.A = region.A();
  s.B = region.B();
  s.T = region.T();
  s.pairs = lattice_points(region);
  s.params = "A=" + std::to_string(s.A) + ";B=" + std::to_string(s.B) +
             ";T=" + std::to_string(s.T);
  if (!region.vertices().empty()) {
    s.params += ";verts=";
    for (const auto& v : region.vertices())
      s.params += "(" + std::to_string(v.u) + " " + std::to_string(v.v) + ")";
  }
  return s;
}

std::vector<std::int64_t> totients_upto(std::int64_t n) {
  std::vector<std::int64_t> phi(static_cast<std::size_t>(n) + 1);
  std::iota(phi.begin(), phi.end(), std::int64_t(0));
  for (std::int64_t i = 2; i <= n; ++i) {
    if (phi[static_cast<std::size_t>(i)] != i) continue;  // composite already handled
    for (std::int64_t j = i; j <= n; j += i)
      phi[static_cast<std::size_t>(j)] -= phi[static_cast<std::size_t>(j)] / i;
  }
  return phi;
}

std::int64_t farey_size_via_phi(std::int64_t T) {
  if (T < 1) throw std::invalid_argument("farey_size_via_phi: T must be positive");
  auto phi = totients_upto(T);
  std::int64_t sum = 0;
  for (std::int64_t k = 1; k <= T; ++k) sum += phi[static_cast<std::size_t>(k)];
  return 2 * sum - 1;
}

}  // namespace stav
