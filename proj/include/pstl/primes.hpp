#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "pstl/common.hpp"
#include "pstl/parallel.hpp"

namespace pstl {

// Distance from t to the nearest integer: min({t}, 1-{t}) in [0, 1/2].
inline double nearest_int_distance(double t) {
  if (!std::isfinite(t)) throw Error("nearest_int_distance: t must be finite");
  if (t < 0.0) throw Error("nearest_int_distance: t must be nonnegative");
  const double f = frac(t);
  return std::min(f, 1.0 - f);
}

// ||sqrt(p)|| with an integer-bracket correction: k = round(sqrt p) is exact
// in integer arithmetic, and sqrt(p) - k = (p - k^2)/(sqrt(p) + k) turns the
// cancellation-prone difference into a well-conditioned quotient. Accurate to
// ~1e-16 relative; plain |sqrt(p) - k| can be off near half-integers on
// platforms with a sloppy sqrt.
inline double sqrt_dist_of(std::uint64_t p) {
  const double s = std::sqrt(static_cast<double>(p));
  const std::uint64_t k = static_cast<std::uint64_t>(std::llround(s));
  const double num = static_cast<double>(static_cast<std::int64_t>(p) -
                                         static_cast<std::int64_t>(k * k));
  return std::abs(num) / (s + static_cast<double>(k));
}

struct PrimeRecord {
  std::uint64_t p = 0;
  double logp = 0.0;
  double sqrt_dist = 0.0;  // ||sqrt(p)||, in [0, 1/2]
};

// Immutable ascending table of all primes p <= X with precomputed weights.
class PrimeTable {
 public:
  PrimeTable() = default;
  PrimeTable(double cutoff, std::vector<PrimeRecord> records)
      : cutoff_(cutoff), records_(std::move(records)) {
    Accumulator acc;
    for (const auto& r : records_) acc.add(r.logp);
    theta_ = acc.value();
  }

  double cutoff() const { return cutoff_; }
  std::size_t size() const { return records_.size(); }
  const std::vector<PrimeRecord>& records() const { return records_; }
  // Chebyshev mass sum(log p) over the table.
  double theta() const { return theta_; }

 private:
  double cutoff_ = 0.0;
  std::vector<PrimeRecord> records_;
  double theta_ = 0.0;
};

inline constexpr double kSieveMax = 1e9;        // memory guard
inline constexpr std::uint64_t kSegmentSpan = 1u << 20;

namespace detail {

inline std::vector<std::uint32_t> base_primes(std::uint64_t limit) {
  const std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 2;
  std::vector<bool> comp(root + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (comp[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= root; j += i) comp[j] = true;
  }
  return out;
}

inline PrimeRecord make_record(std::uint64_t p) {
  return {p, std::log(static_cast<double>(p)), sqrt_dist_of(p)};
}

}  // namespace detail

// Segmented sieve of all primes <= X. Memory is O(sqrt X + segment); segments
// are sieved in parallel and merged in order.
inline PrimeTable sieve(double X, int workers = 0) {
  if (!(X >= 2.0)) throw Error("sieve: X must be at least 2");
  if (X > kSieveMax) throw Error("sieve: X exceeds the 1e9 resource guard");
  const std::uint64_t limit = static_cast<std::uint64_t>(std::floor(X));
  const auto base = detail::base_primes(limit);

  const std::uint64_t nseg = (limit - 1) / kSegmentSpan + 1;
  std::vector<std::vector<PrimeRecord>> per_seg(nseg);
  const int nw = resolve_workers(workers);
  for_each_chunk(nseg, 1, nw, [&](std::size_t seg, std::size_t, std::size_t) {
    const std::uint64_t lo = std::max<std::uint64_t>(2, seg * kSegmentSpan);
    const std::uint64_t hi = std::min(limit + 1, (seg + 1) * kSegmentSpan);
    if (lo >= hi) return;
    std::vector<bool> comp(hi - lo, false);
    for (std::uint32_t q : base) {
      const std::uint64_t q64 = q;
      if (q64 * q64 >= hi) break;
      std::uint64_t start = std::max(q64 * q64, ((lo + q64 - 1) / q64) * q64);
      for (std::uint64_t v = start; v < hi; v += q64) comp[v - lo] = true;
    }
    auto& out = per_seg[seg];
    for (std::uint64_t v = lo; v < hi; ++v)
      if (!comp[v - lo]) out.push_back(detail::make_record(v));
  });

  std::vector<PrimeRecord> records;
  for (auto& seg : per_seg) {
    records.insert(records.end(), seg.begin(), seg.end());
    seg.clear();
  }
  return PrimeTable(X, std::move(records));
}

// Subtable of records with ||sqrt p|| strictly below Y, order preserved.
inline PrimeTable near_square_subset(const PrimeTable& t, double Y) {
  if (!(Y > 0.0 && Y <= 0.5)) throw Error("near_square_subset: Y must lie in (0, 1/2]");
  std::vector<PrimeRecord> out;
  for (const auto& r : t.records())
    if (r.sqrt_dist < Y) out.push_back(r);
  return PrimeTable(t.cutoff(), std::move(out));
}

// Deterministic Miller-Rabin, valid for all 64-bit n.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  auto mulmod = [n](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
  };
  auto powmod = [&](std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
      if (e & 1) r = mulmod(r, a);
      a = mulmod(a, a);
      e >>= 1;
    }
    return r;
  };
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a % n, d);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// ----- binary cache -----------------------------------------------------
// Layout (little-endian): magic "PSTL1" (5 bytes), X as f64, count as u64,
// then per record (p: u64, logp: f64, sqrt_dist: f64).

inline constexpr char kCacheMagic[5] = {'P', 'S', 'T', 'L', '1'};

inline void save_cache(const PrimeTable& t, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("save_cache: cannot open " + path);
  f.write(kCacheMagic, 5);
  const double x = t.cutoff();
  const std::uint64_t count = t.size();
  f.write(reinterpret_cast<const char*>(&x), 8);
  f.write(reinterpret_cast<const char*>(&count), 8);
  for (const auto& r : t.records()) {
    f.write(reinterpret_cast<const char*>(&r.p), 8);
    f.write(reinterpret_cast<const char*>(&r.logp), 8);
    f.write(reinterpret_cast<const char*>(&r.sqrt_dist), 8);
  }
  if (!f) throw Error("save_cache: write failed for " + path);
}

inline PrimeTable load_cache(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("load_cache: cannot open " + path);
  char magic[5];
  f.read(magic, 5);
  if (!f || std::memcmp(magic, kCacheMagic, 5) != 0)
    throw Error("load_cache: bad magic in " + path);
  double x = 0.0;
  std::uint64_t count = 0;
  f.read(reinterpret_cast<char*>(&x), 8);
  f.read(reinterpret_cast<char*>(&count), 8);
  std::vector<PrimeRecord> recs(count);
  for (auto& r : recs) {
    f.read(reinterpret_cast<char*>(&r.p), 8);
    f.read(reinterpret_cast<char*>(&r.logp), 8);
    f.read(reinterpret_cast<char*>(&r.sqrt_dist), 8);
  }
  if (!f) throw Error("load_cache: truncated file " + path);
  return PrimeTable(x, std::move(recs));
}

}  // namespace pstl
