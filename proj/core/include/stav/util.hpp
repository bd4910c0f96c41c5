#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace stav {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = kFnvOffset) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Deterministic formatting for CSV output; %.12g keeps files readable while
// staying byte-stable for identical inputs.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Accumulates many floating-point terms with bounded roundoff: plain running
// sums within 2^16-term blocks, block totals combined pairwise at the end.
template <typename T>
class PairwiseSum {
 public:
  void add(T x) {
    block_ += x;
    if (++filled_ == kBlock) {
      blocks_.push_back(block_);
      block_ = T{};
      filled_ = 0;
    }
  }

  T total() const {
    std::vector<T> parts = blocks_;
    if (filled_ > 0) parts.push_back(block_);
    return fold(parts, 0, parts.size());
  }

 private:
  static constexpr std::size_t kBlock = 1u << 16;

  static T fold(const std::vector<T>& parts, std::size_t lo, std::size_t hi) {
    if (hi == lo) return T{};
    if (hi - lo == 1) return parts[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    return fold(parts, lo, mid) + fold(parts, mid, hi);
  }

  std::vector<T> blocks_;
  T block_{};
  std::size_t filled_ = 0;
};

// Runs fn(i) for i in [0, n) on `jobs` threads.  Results land in a slot per
// index, so the outcome is independent of thread scheduling; callers fold the
// returned vector in index order.
template <typename Result>
std::vector<Result> parallel_index_map(std::size_t n, int jobs,
                                       const std::function<Result(std::size_t)>& fn) {
  std::vector<Result> out(n);
  if (n == 0) return out;
  if (jobs < 1) jobs = 1;
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mu;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace stav
