#pragma once

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pstl/common.hpp"
#include "pstl/parallel.hpp"
#include "pstl/params.hpp"
#include "pstl/primes.hpp"
#include "pstl/smoothing.hpp"

namespace pstl {

// ----- floor powers ------------------------------------------------------

// When the double-precision fractional part of p^c falls inside this band
// around 0 or 1, the floor is recomputed at 113-bit precision.
inline constexpr double kFloorGuardBand = 1e-6;

namespace detail {

inline void validate_exponent(double c) {
  if (!(c > 1.0 && c < kCMax))
    throw Error("floor_power: c out of range, need 1 < c < 37/36");
}

}  // namespace detail

// floor(p^c) recomputed as exp(c log p) in __float128 (113-bit mantissa).
// Boundary-guard path; also the reference side of the guard-equivalence test.
inline std::int64_t floor_power_certified(std::uint64_t p, double c) {
  const __float128 v = expq(static_cast<__float128>(c) * logq(static_cast<__float128>(p)));
  return static_cast<std::int64_t>(floorq(v));
}

// Exact floor(p^c). The double-precision power is trusted away from integer
// boundaries; within kFloorGuardBand of one the certified path decides.
inline std::int64_t floor_power(std::uint64_t p, double c) {
  if (p < 2) throw Error("floor_power: p must be at least 2");
  detail::validate_exponent(c);
  if (c * std::log2(static_cast<double>(p)) >= 62.999)
    throw Error("floor_power: p^c exceeds the 63-bit range");
  const double v = std::pow(static_cast<double>(p), c);
  const double f = v - std::floor(v);
  if (f < kFloorGuardBand || f > 1.0 - kFloorGuardBand)
    return floor_power_certified(p, c);
  return static_cast<std::int64_t>(std::floor(v));
}

// [p^c] for every record of a prime table, in table order.
struct FloorPowerMap {
  double c = 0.0;
  std::int64_t max_entry = 0;
  std::vector<std::int64_t> entries;
};

inline FloorPowerMap build_floor_powers(const PrimeTable& t, double c, int workers = 0) {
  detail::validate_exponent(c);
  FloorPowerMap fp;
  fp.c = c;
  fp.entries.resize(t.size());
  const auto& recs = t.records();
  for_each_chunk(t.size(), 4096, resolve_workers(workers),
                 [&](std::size_t, std::size_t b, std::size_t e) {
                   for (std::size_t i = b; i < e; ++i)
                     fp.entries[i] = floor_power(recs[i].p, c);
                 });
  fp.max_entry = fp.entries.empty() ? 0 : fp.entries.back();
  return fp;
}

namespace detail {

inline void check_consistent(const PrimeTable& t, const FloorPowerMap& fp) {
  if (t.size() != fp.entries.size())
    throw Error("prime table and floor-power map cover different ranges");
}

}  // namespace detail

// ----- per-record weights -------------------------------------------------

inline std::vector<double> log_weights(const PrimeTable& t) {
  std::vector<double> w(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) w[i] = t.records()[i].logp;
  return w;
}

// chi(sqrt p) log p with the exact piecewise-polynomial bump.
inline std::vector<double> smooth_weights(const PrimeTable& t, const BumpSpec& spec) {
  std::vector<double> w(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& r = t.records()[i];
    w[i] = chi_exact(spec, std::sqrt(static_cast<double>(r.p))) * r.logp;
  }
  return w;
}

inline std::vector<double> sharp_weights(const PrimeTable& t, double Y) {
  if (!(Y > 0.0 && Y <= 0.5)) throw Error("sharp_weights: Y must lie in (0, 1/2]");
  std::vector<double> w(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& r = t.records()[i];
    w[i] = r.sqrt_dist < Y ? r.logp : 0.0;
  }
  return w;
}

// (chi_series(sqrt p) - g(0)) log p. Folding the oscillation series
//   sum_{0<|m|<=trunc} g(m) e(alpha [p^c] + m sqrt p)
// over +-m gives e(alpha [p^c]) * sum_m 2 g(m) cos(2 pi m sqrt p), i.e. the
// series route of V is a plain weighted sum with these weights.
inline std::vector<double> series_residual_weights(const PrimeTable& t, const BumpSpec& spec) {
  const double g0 = fourier_coeff(spec, 0);
  std::vector<double> w(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& r = t.records()[i];
    w[i] = (chi(spec, std::sqrt(static_cast<double>(r.p))) - g0) * r.logp;
  }
  return w;
}

// ----- pointwise sums over alpha -------------------------------------------

// sum_p w_p e(alpha [p^c]); alpha is reduced mod 1 first (integer
// frequencies), so the 1-periodicity is exact by construction.
inline cplx weighted_sum(double alpha, const PrimeTable& t, const FloorPowerMap& fp,
                         std::span<const double> w) {
  detail::check_consistent(t, fp);
  const double a = frac(alpha);
  ComplexAccumulator acc;
  for (std::size_t i = 0; i < fp.entries.size(); ++i) {
    if (w[i] == 0.0) continue;
    const double f = mul_mod1(a, static_cast<double>(fp.entries[i]));
    acc.add(w[i] * unit_exp_reduced(f));
  }
  return acc.value();
}

// S(alpha) = sum_{p<=X} e(alpha [p^c]) log p.
inline cplx sum_S(double alpha, const PrimeTable& t, const FloorPowerMap& fp) {
  detail::check_consistent(t, fp);
  const double a = frac(alpha);
  ComplexAccumulator acc;
  for (std::size_t i = 0; i < fp.entries.size(); ++i) {
    const double f = mul_mod1(a, static_cast<double>(fp.entries[i]));
    acc.add(t.records()[i].logp * unit_exp_reduced(f));
  }
  return acc.value();
}

// H(alpha) = sum_{p<=X} chi(sqrt p) e(alpha [p^c]) log p, exact bump.
inline cplx sum_H(double alpha, const PrimeTable& t, const FloorPowerMap& fp,
                  const BumpSpec& spec) {
  const auto w = smooth_weights(t, spec);
  return weighted_sum(alpha, t, fp, w);
}

// U(alpha, m) = sum_{p<=X} e(alpha [p^c] + m sqrt p) log p.
inline cplx sum_U(double alpha, std::int64_t m, const PrimeTable& t, const FloorPowerMap& fp) {
  detail::check_consistent(t, fp);
  const double a = frac(alpha);
  const double am = static_cast<double>(m < 0 ? -m : m);
  ComplexAccumulator acc;
  for (std::size_t i = 0; i < fp.entries.size(); ++i) {
    const auto& rec = t.records()[i];
    double f = mul_mod1(a, static_cast<double>(fp.entries[i]));
    if (m != 0) {
      const double sp = frac(std::sqrt(static_cast<double>(rec.p)));
      double g = mul_mod1(sp, am);
      if (m < 0) g = g == 0.0 ? 0.0 : 1.0 - g;
      f += g;
      f -= std::floor(f);
    }
    acc.add(rec.logp * unit_exp_reduced(f));
  }
  return acc.value();
}

// V(alpha) by the truncated oscillation series (tail certified by the spec).
inline cplx sum_V_series(double alpha, const PrimeTable& t, const FloorPowerMap& fp,
                         const BumpSpec& spec) {
  const auto w = series_residual_weights(t, spec);
  return weighted_sum(alpha, t, fp, w);
}

// V(alpha) through the decomposition H(alpha) = g(0) S(alpha) + V(alpha).
inline cplx sum_V_from_H(double alpha, const PrimeTable& t, const FloorPowerMap& fp,
                         const BumpSpec& spec) {
  return sum_H(alpha, t, fp, spec) - fourier_coeff(spec, 0) * sum_S(alpha, t, fp);
}

// ----- uniform-grid evaluation ---------------------------------------------

inline std::vector<cplx> make_unit_roots(int K) {
  std::vector<cplx> roots(K);
  for (int t = 0; t < K; ++t)
    roots[t] = unit_exp_reduced(static_cast<double>(t) / K);
  return roots;
}

// F(k/K) for k = 0..K-1 where F(alpha) = sum_p w_p e(alpha [p^c]). Weights
// are first binned by [p^c] mod K, then each grid value is a short sum over
// nonzero residue bins with exactly indexed roots of unity: phases carry no
// rounding at all, only the compensated summation does. Chunked over k so
// the result is bit-identical for any worker count.
inline std::vector<cplx> grid_weighted(const PrimeTable& t, const FloorPowerMap& fp,
                                       std::span<const double> w, int K, int workers = 0) {
  detail::check_consistent(t, fp);
  if (K < 1) throw Error("grid_weighted: K must be positive");
  std::vector<Accumulator> bins(K);
  for (std::size_t i = 0; i < fp.entries.size(); ++i) {
    if (w[i] == 0.0) continue;
    bins[static_cast<std::size_t>(fp.entries[i] % K)].add(w[i]);
  }
  std::vector<std::pair<std::uint64_t, double>> nz;
  nz.reserve(bins.size());
  for (int j = 0; j < K; ++j) {
    const double v = bins[j].value();
    if (v != 0.0) nz.emplace_back(static_cast<std::uint64_t>(j), v);
  }
  const auto roots = make_unit_roots(K);
  std::vector<cplx> out(K);
  const std::uint64_t uk = static_cast<std::uint64_t>(K);
  for_each_chunk(static_cast<std::size_t>(K), 256, resolve_workers(workers),
                 [&](std::size_t, std::size_t b, std::size_t e) {
                   for (std::size_t k = b; k < e; ++k) {
                     ComplexAccumulator acc;
                     for (const auto& [j, wj] : nz)
                       acc.add(wj * roots[(k * j) % uk]);
                     out[k] = acc.value();
                   }
                 });
  return out;
}

inline std::vector<cplx> grid_S(const PrimeTable& t, const FloorPowerMap& fp, int K,
                                int workers = 0) {
  const auto w = log_weights(t);
  return grid_weighted(t, fp, w, K, workers);
}

inline std::vector<cplx> grid_H(const PrimeTable& t, const FloorPowerMap& fp,
                                const BumpSpec& spec, int K, int workers = 0) {
  const auto w = smooth_weights(t, spec);
  return grid_weighted(t, fp, w, K, workers);
}

inline std::vector<cplx> grid_V_series(const PrimeTable& t, const FloorPowerMap& fp,
                                       const BumpSpec& spec, int K, int workers = 0) {
  const auto w = series_residual_weights(t, spec);
  return grid_weighted(t, fp, w, K, workers);
}

// ----- exact integrals by finite sampling ----------------------------------

// integral over [0,1] of F(alpha)^j e(-N0 alpha) d alpha, computed as
// (1/K) sum_k F(k/K)^j e(-N0 k/K). Exact (up to summation roundoff) by
// orthogonality whenever all frequencies of F lie in [0, max_freq] and
// K >= j*max_freq + 1.
inline cplx integral_power_twist(std::span<const cplx> grid, int j, std::int64_t N0,
                                 std::int64_t max_freq) {
  if (j < 1 || j > 3) throw Error("integral_power_twist: power j must be 1, 2 or 3");
  if (N0 < 0) throw Error("integral_power_twist: twist N0 must be nonnegative");
  const std::int64_t K = static_cast<std::int64_t>(grid.size());
  if (K < j * max_freq + 1)
    throw Error("integral_power_twist: sample count below the Nyquist bound j*N+1");
  const auto roots = make_unit_roots(static_cast<int>(K));
  const std::uint64_t uk = static_cast<std::uint64_t>(K);
  const std::uint64_t n0 = static_cast<std::uint64_t>(N0) % uk;
  ComplexAccumulator acc;
  for (std::int64_t k = 0; k < K; ++k) {
    cplx v = grid[k];
    if (j >= 2) v *= grid[k];
    if (j == 3) v *= grid[k];
    const std::uint64_t idx = (uk - (n0 * static_cast<std::uint64_t>(k)) % uk) % uk;
    acc.add(v * roots[idx]);
  }
  return acc.value() / static_cast<double>(K);
}

// integral over [0,1] of |F|^2 = (1/K) sum_k |F(k/K)|^2; exact for K >= max
// frequency + 1 (the spec's engine is still asked for K >= 2*max_freq + 1).
inline double integral_abs2(std::span<const cplx> grid) {
  Accumulator acc;
  for (const auto& z : grid) acc.add(std::norm(z));
  return acc.value() / static_cast<double>(grid.size());
}

// ----- coefficients of y -> e(-x {y}) ---------------------------------------

// c_h(x) = (1 - e(-x)) / (2 pi i (h + x)): the exact Fourier coefficients of
// the 1-periodic function y -> e(-x {y}).
inline cplx frac_exp_coeff(double x, std::int64_t h) {
  const double denom = static_cast<double>(h) + x;
  if (denom == 0.0) throw Error("frac_exp_coeff: pole at h + x = 0");
  const cplx num = cplx(1.0, 0.0) - unit_exp(-x);
  return num / cplx(0.0, kTwoPi * denom);
}

struct ResidualScan {
  double ratio_max = 0.0;    // max |err| / min(1, 1/(H ||y||))
  double raw_max = 0.0;      // max |err|
  double raw_max_far = 0.0;  // max |err| over ||y|| >= 0.1
};

// Empirical implied constant of the truncated expansion
//   e(-x{y}) = sum_{|h|<=H} c_h(x) e(hy) + O(min(1, 1/(H ||y||))).
// The expansion degenerates at integer x (all coefficients vanish), hence
// the restricted x range; y must stay 1e-6 away from integers.
inline ResidualScan frac_exp_residual_scan(double x, double H, std::span<const double> ys) {
  if (!(x >= 0.05 && x <= 0.95))
    throw Error("frac_exp_residual_scan: x must lie in [0.05, 0.95]");
  if (!(H >= 3.0)) throw Error("frac_exp_residual_scan: H must be at least 3");
  const std::int64_t hmax = static_cast<std::int64_t>(std::floor(H));
  std::vector<cplx> coef(2 * hmax + 1);
  for (std::int64_t h = -hmax; h <= hmax; ++h)
    coef[static_cast<std::size_t>(h + hmax)] = frac_exp_coeff(x, h);

  ResidualScan scan;
  for (double y : ys) {
    const double fy = frac(y);
    const double ynorm = std::min(fy, 1.0 - fy);
    if (ynorm < 1e-6)
      throw Error("frac_exp_residual_scan: y grid must avoid integers by 1e-6");
    const cplx ey = unit_exp_reduced(fy);
    cplx z = std::conj(unit_exp_reduced(mul_mod1(fy, static_cast<double>(hmax))));
    cplx series(0.0, 0.0);
    for (std::int64_t h = -hmax; h <= hmax; ++h) {
      series += coef[static_cast<std::size_t>(h + hmax)] * z;
      z *= ey;
    }
    const double err = std::abs(unit_exp(-x * fy) - series);
    const double scale = std::min(1.0, 1.0 / (H * ynorm));
    scan.ratio_max = std::max(scan.ratio_max, err / scale);
    scan.raw_max = std::max(scan.raw_max, err);
    if (ynorm >= 0.1) scan.raw_max_far = std::max(scan.raw_max_far, err);
  }
  return scan;
}

// ----- bound right-hand sides ----------------------------------------------

// The seven-term majorant for max |V(alpha)|; fudge stands in for X^eps
// times the implied constant.
inline double sup_v_bound_rhs(const Params& p, double fudge) {
  if (!(fudge > 0.0)) throw Error("sup_v_bound_rhs: fudge must be positive");
  const double X = p.X, M = p.M, c = p.c;
  const double sum = std::pow(M, 0.5) * std::pow(X, 7.0 / 12.0) +
                     std::pow(M, 1.0 / 6.0) * std::pow(X, 0.75) +
                     std::pow(X, 11.0 / 12.0) +
                     std::pow(X, (2.0 * c + 31.0) / 34.0) +
                     std::pow(M, 0.25) * std::pow(X, (69.0 - 12.0 * c) / 68.0) +
                     std::pow(M, 1.0 / 12.0) * std::pow(X, (131.0 - 8.0 * c) / 136.0) +
                     std::pow(X, (32.0 * c + 3.0) / 68.0);
  return fudge * sum;
}

// The two right-hand sides of the V = V1 + V2 split: six H-weighted terms
// for the oscillation part and (H^{-1} X + H^{1/2} X^{c/2}) for the
// fractional-part error sum.
inline std::pair<double, double> v_split_bound_rhs(const Params& p, double fudge) {
  if (!(fudge > 0.0)) throw Error("v_split_bound_rhs: fudge must be positive");
  const double X = p.X, M = p.M, c = p.c, H = p.H;
  const double v1 = std::pow(M, 0.5) * std::pow(X, 7.0 / 12.0) +
                    std::pow(M, 1.0 / 6.0) * std::pow(X, 0.75) +
                    std::pow(X, 11.0 / 12.0) +
                    std::pow(H, 1.0 / 16.0) * std::pow(X, (2.0 * c + 29.0) / 32.0) +
                    std::pow(H, -3.0 / 16.0) * std::pow(M, 0.25) * std::pow(X, (33.0 - 6.0 * c) / 32.0) +
                    std::pow(H, -1.0 / 16.0) * std::pow(M, 1.0 / 12.0) * std::pow(X, (31.0 - 2.0 * c) / 32.0);
  const double v2 = std::pow(H, -1.0) * X + std::pow(H, 0.5) * std::pow(X, 0.5 * c);
  return {fudge * v1, fudge * v2};
}

struct SupVScan {
  int grid = 0;
  double sup_v = 0.0;
  double bound_rhs = 0.0;  // seven-term majorant at fudge 1
  double ratio = 0.0;
};

// Grid lower bound on max |V| plus its ratio against the majorant;
// reporting only, never asserted against the unknowable implied constant.
inline SupVScan sup_v_scan(int K, const PrimeTable& t, const FloorPowerMap& fp,
                           const BumpSpec& spec, const Params& p, int workers = 0) {
  if (K < 1000) throw Error("sup_v_scan: grid must have at least 1000 points");
  const auto vals = grid_V_series(t, fp, spec, K, workers);
  double sup = 0.0;
  for (const auto& z : vals) sup = std::max(sup, std::abs(z));
  SupVScan out;
  out.grid = K;
  out.sup_v = sup;
  out.bound_rhs = sup_v_bound_rhs(p, 1.0);
  out.ratio = sup / out.bound_rhs;
  return out;
}

}  // namespace pstl
