#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pstl/common.hpp"
#include "pstl/expsums.hpp"
#include "pstl/fft.hpp"
#include "pstl/gamma_approx.hpp"
#include "pstl/primes.hpp"
#include "pstl/smoothing.hpp"

namespace pstl {

enum class SpectrumMode { kPlain, kSmooth, kSharp };

inline const char* to_string(SpectrumMode m) {
  switch (m) {
    case SpectrumMode::kPlain: return "plain";
    case SpectrumMode::kSmooth: return "smooth";
    case SpectrumMode::kSharp: return "sharp";
  }
  return "?";
}

// n -> sum of w(p) over primes with [p^c] = n, the bridge between the
// integral evaluators and the representation counts. Weight w(p) is log p
// (plain), chi(sqrt p) log p (smooth) or an indicator-cut log p (sharp).
struct WeightedSpectrum {
  double c = 0.0;
  SpectrumMode mode = SpectrumMode::kPlain;
  std::int64_t max_entry = 0;
  std::vector<double> weights;  // index n in [0, max_entry]
  double mass = 0.0;            // sum of all weights
};

inline WeightedSpectrum build_spectrum(const PrimeTable& t, const FloorPowerMap& fp,
                                       SpectrumMode mode, const BumpSpec* bump = nullptr,
                                       double Y = 0.5) {
  if (t.size() != fp.entries.size())
    throw Error("build_spectrum: table and floor-power map cover different ranges");
  std::vector<double> per_record;
  switch (mode) {
    case SpectrumMode::kPlain:
      per_record = log_weights(t);
      break;
    case SpectrumMode::kSmooth:
      if (!bump) throw Error("build_spectrum: smooth mode needs a bump spec");
      per_record = smooth_weights(t, *bump);
      break;
    case SpectrumMode::kSharp:
      per_record = sharp_weights(t, Y);
      break;
  }
  WeightedSpectrum s;
  s.c = fp.c;
  s.mode = mode;
  s.max_entry = fp.max_entry;
  s.weights.assign(static_cast<std::size_t>(fp.max_entry) + 1, 0.0);
  Accumulator mass;
  for (std::size_t i = 0; i < fp.entries.size(); ++i) {
    s.weights[static_cast<std::size_t>(fp.entries[i])] += per_record[i];
    mass.add(per_record[i]);
  }
  s.mass = mass.value();
  return s;
}

// sum_n w(n)^2: the combinatorial value of the mean square of the weighted
// exponential sum over a full period.
inline double collision_sum(const WeightedSpectrum& s) {
  Accumulator acc;
  for (double w : s.weights) acc.add(w * w);
  return acc.value();
}

// Ternary counter: caches the self-convolution w*w once, then each count is
// one dot product with the reflected weight array.
class TernaryCounter {
 public:
  explicit TernaryCounter(const WeightedSpectrum& s)
      : max_entry_(s.max_entry), weights_(s.weights), conv_(convolve(s.weights, s.weights)) {}

  std::int64_t max_target() const { return 3 * max_entry_; }

  // R(N) = sum over ordered triples n1+n2+n3 = N of w(n1) w(n2) w(n3).
  // Targets outside [0, 3*max] count zero.
  double count(std::int64_t N) const {
    if (N < 0 || N > max_target()) return 0.0;
    const std::int64_t lo = std::max<std::int64_t>(0, N - 2 * max_entry_);
    const std::int64_t hi = std::min(max_entry_, N);
    Accumulator acc;
    for (std::int64_t n = lo; n <= hi; ++n) {
      const double w = weights_[static_cast<std::size_t>(n)];
      if (w == 0.0) continue;
      acc.add(w * conv_[static_cast<std::size_t>(N - n)]);
    }
    return acc.value();
  }

 private:
  std::int64_t max_entry_;
  std::vector<double> weights_;
  std::vector<double> conv_;
};

inline double ternary_count(const WeightedSpectrum& s, std::int64_t N) {
  return TernaryCounter(s).count(N);
}

inline double gamma_sharp(const PrimeTable& t, const FloorPowerMap& fp, double Y,
                          std::int64_t N) {
  return ternary_count(build_spectrum(t, fp, SpectrumMode::kSharp, nullptr, Y), N);
}

inline double gamma_smooth(const PrimeTable& t, const FloorPowerMap& fp,
                           const BumpSpec& spec, std::int64_t N) {
  return ternary_count(build_spectrum(t, fp, SpectrumMode::kSmooth, &spec), N);
}

// Leading asymptotic term Gamma(1+1/c)^3 / Gamma(3/c) * N^(3/c-1). Also
// accepts c = 1, where it collapses to N^2/2 exactly.
inline double main_term(std::int64_t N, double c) {
  if (N < 1) throw Error("main_term: N must be positive");
  if (!(c >= 1.0 && c < kCMax)) throw Error("main_term: c out of range [1, 37/36)");
  const double g1 = gamma_lanczos(1.0 + 1.0 / c);
  const double g3 = gamma_lanczos(3.0 / c);
  return g1 * g1 * g1 / g3 * std::pow(static_cast<double>(N), 3.0 / c - 1.0);
}

struct RatioRow {
  std::int64_t N = 0;
  double count = 0.0;
  double main = 0.0;
  double ratio = 0.0;
};

struct ScanSummary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

inline std::vector<RatioRow> ratio_scan(const TernaryCounter& counter, double c,
                                        std::int64_t n_min, std::int64_t n_max,
                                        std::int64_t step) {
  if (step < 1) throw Error("ratio_scan: step must be at least 1");
  if (n_min < 1 || n_max < n_min) throw Error("ratio_scan: bad N range");
  std::vector<RatioRow> rows;
  for (std::int64_t N = n_min; N <= n_max; N += step) {
    RatioRow row;
    row.N = N;
    row.count = counter.count(N);
    row.main = main_term(N, c);
    row.ratio = row.count / row.main;
    rows.push_back(row);
  }
  return rows;
}

inline ScanSummary summarize_ratios(const std::vector<RatioRow>& rows) {
  std::vector<double> r;
  r.reserve(rows.size());
  for (const auto& row : rows) r.push_back(row.ratio);
  std::sort(r.begin(), r.end());
  auto quantile = [&](double q) {
    if (r.empty()) return 0.0;
    const double pos = q * static_cast<double>(r.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    return i + 1 < r.size() ? r[i] * (1.0 - f) + r[i + 1] * f : r[i];
  };
  return {quantile(0.5), quantile(0.25), quantile(0.75)};
}

// One representative per multiset {p1 <= p2 <= p3}; orbit is the number of
// ordered rearrangements (1, 3 or 6) and weight the full orbit contribution.
struct TripleOrbit {
  std::uint64_t p1 = 0, p2 = 0, p3 = 0;
  int orbit = 0;
  double weight = 0.0;
};

// Enumerates all multisets with [p1^c]+[p2^c]+[p3^c] = N and nonzero mode
// weight. Quadratic in the table size; meant for desk-scale listings and as
// a cross-check of the convolution counter.
inline std::vector<TripleOrbit> enumerate_triples(const PrimeTable& t, const FloorPowerMap& fp,
                                                  std::int64_t N, SpectrumMode mode,
                                                  const BumpSpec* bump = nullptr,
                                                  double Y = 0.5) {
  std::vector<double> w;
  switch (mode) {
    case SpectrumMode::kPlain: w = log_weights(t); break;
    case SpectrumMode::kSmooth:
      if (!bump) throw Error("enumerate_triples: smooth mode needs a bump spec");
      w = smooth_weights(t, *bump);
      break;
    case SpectrumMode::kSharp: w = sharp_weights(t, Y); break;
  }
  const auto& n = fp.entries;  // strictly increasing: gaps of p^c exceed 1
  std::vector<TripleOrbit> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (w[i] == 0.0) continue;
    if (3 * n[i] > N) break;
    for (std::size_t j = i; j < n.size(); ++j) {
      if (w[j] == 0.0) continue;
      const std::int64_t need = N - n[i] - n[j];
      if (need < n[j]) break;
      const auto it = std::lower_bound(n.begin() + static_cast<std::ptrdiff_t>(j), n.end(), need);
      if (it == n.end() || *it != need) continue;
      const std::size_t k = static_cast<std::size_t>(it - n.begin());
      if (w[k] == 0.0) continue;
      TripleOrbit orb;
      orb.p1 = t.records()[i].p;
      orb.p2 = t.records()[j].p;
      orb.p3 = t.records()[k].p;
      orb.orbit = (i == j && j == k) ? 1 : (i == j || j == k) ? 3 : 6;
      orb.weight = orb.orbit * w[i] * w[j] * w[k];
      out.push_back(orb);
    }
  }
  return out;
}

}  // namespace pstl
