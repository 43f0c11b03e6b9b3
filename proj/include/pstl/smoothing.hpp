#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "pstl/common.hpp"
#include "pstl/params.hpp"

namespace pstl {

// 1-periodic bump chi(t): 1 on ||t|| <= Y - Delta, 0 on ||t|| >= Y, in [0,1]
// between, r-times continuously differentiable.
//
// Concrete construction: the indicator of ||u|| <= Y - Delta/2 convolved r
// times with the uniform density of width Delta/r. That fixes the Fourier
// coefficients to
//
//   g(0) = 2Y - Delta
//   g(m) = sin(pi m (2Y - Delta))/(pi m) * (sin(pi m Delta/r)/(pi m Delta/r))^r
//
// with |g(m)| <= min(1/(pi|m|), (1/(pi|m|)) (r/(pi|m| Delta))^r) and
// g(-m) = g(m). Under Delta = Y/5 the mean g(0) equals (9/5) Y.
struct BumpSpec {
  double Y = 0.0;
  double Delta = 0.0;
  int r = 0;
  int trunc = 0;       // series retains 0 < |m| <= trunc
  double tail = 0.0;   // certified bound on sum_{|m| > trunc} |g(m)|
  double tail_target = 0.0;
};

inline constexpr double kBumpTailTarget = 1e-9;
inline constexpr int kBumpTruncCap = 1 << 16;
inline constexpr int kBumpOrderMax = 60;

// min(1/(pi m), (1/(pi m)) (r/(pi m Delta))^r) evaluated at real m > 0.
inline double coeff_bound(int r, double Delta, double m) {
  const double lead = 1.0 / (kPi * m);
  const double base = static_cast<double>(r) / (kPi * m * Delta);
  if (base >= 1.0) return lead;
  return lead * std::pow(base, r);
}

// Upper bound on sum_{|m| > M0} |g(m)| by integral comparison against the
// decreasing majorant b(t) = min(1/(pi t), r^r/(pi Delta^r t^{r+1})). The two
// branches meet at t = A = r/(pi Delta) and both integrate in closed form.
inline double tail_bound(int r, double Delta, double M0) {
  if (!(M0 >= 1.0)) throw Error("tail_bound: M0 must be at least 1");
  const double A = static_cast<double>(r) / (kPi * Delta);
  double one_side;
  if (M0 >= A) {
    one_side = std::pow(A / M0, r) / (kPi * r);
  } else {
    one_side = std::log(A / M0) / kPi + 1.0 / (kPi * r);
  }
  return 2.0 * one_side;
}

inline double tail_bound(const BumpSpec& spec, double M0) {
  return tail_bound(spec.r, spec.Delta, M0);
}

// Builds a spec with the smallest truncation whose certified tail is at most
// tail_target, capped at trunc_cap (for r = 1 the series decays like 1/m^2
// and the target can be unreachable; the achieved tail is recorded either
// way and callers widen tolerances from it).
inline BumpSpec make_bump(double Y, double Delta, int r,
                          double tail_target = kBumpTailTarget,
                          int trunc_cap = kBumpTruncCap) {
  if (!(Y > 0.0 && Y <= 0.5)) throw Error("BumpSpec: Y must lie in (0, 1/2]");
  if (!(Delta > 0.0 && Delta < Y)) throw Error("BumpSpec: Delta must lie in (0, Y)");
  if (r < 1) throw Error("BumpSpec: r must be at least 1");
  if (r > kBumpOrderMax) throw Error("BumpSpec: r exceeds the supported order 60");
  BumpSpec spec{Y, Delta, r, 0, 0.0, tail_target};
  int lo = 1, hi = trunc_cap;
  if (tail_bound(r, Delta, static_cast<double>(trunc_cap)) > tail_target) {
    spec.trunc = trunc_cap;
  } else {
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      if (tail_bound(r, Delta, static_cast<double>(mid)) <= tail_target)
        hi = mid;
      else
        lo = mid + 1;
    }
    spec.trunc = lo;
  }
  spec.tail = tail_bound(r, Delta, static_cast<double>(spec.trunc));
  return spec;
}

inline BumpSpec bump_from_params(const Params& p,
                                 double tail_target = kBumpTailTarget,
                                 int trunc_cap = kBumpTruncCap) {
  return make_bump(p.Y, p.Delta, p.r, tail_target, trunc_cap);
}

// Fourier coefficient g(m). sin(pi m q) is evaluated as sin(2 pi ((m q/2)
// mod 1)) so the argument reduction stays exact for large m.
inline double fourier_coeff(const BumpSpec& spec, std::int64_t m) {
  if (m == 0) return 2.0 * spec.Y - spec.Delta;
  const double am = static_cast<double>(m < 0 ? -m : m);
  const double q = 2.0 * spec.Y - spec.Delta;
  const double s1 = std::sin(kTwoPi * mul_mod1(0.5 * q, am)) / (kPi * am);
  const double x = kPi * am * spec.Delta / spec.r;
  double sinc;
  if (x < 0.5) {
    sinc = x < 1e-12 ? 1.0 : std::sin(x) / x;
  } else {
    sinc = std::sin(kTwoPi * mul_mod1(0.5 * spec.Delta / spec.r, am)) / x;
  }
  const double mag = std::pow(std::abs(sinc), spec.r);
  const bool neg = (spec.r & 1) && sinc < 0.0;
  return s1 * (neg ? -mag : mag);
}

// Truncated Fourier series g(0) + sum_{0<|m|<=trunc} g(m) e(mt); within the
// certified tail of the exact bump.
inline double chi(const BumpSpec& spec, double t) {
  if (!std::isfinite(t)) throw Error("chi: t must be finite");
  const double f = frac(t);
  Accumulator acc;
  acc.add(fourier_coeff(spec, 0));
  for (int m = 1; m <= spec.trunc; ++m) {
    const double g = fourier_coeff(spec, m);
    acc.add(2.0 * g * std::cos(kTwoPi * mul_mod1(f, static_cast<double>(m))));
  }
  return acc.value();
}

namespace detail {

// Cardinal B-spline of the given order (support [0, order]) via the
// Cox-de Boor recurrence; all coefficients are nonnegative inside the
// support, so the evaluation is stable for any order we allow.
inline double bspline(int order, double x) {
  if (x <= 0.0 || x >= static_cast<double>(order)) return 0.0;
  double vals[kBumpOrderMax + 2];
  for (int j = 0; j < order; ++j) {
    const double u = x - j;
    vals[j] = (u >= 0.0 && u < 1.0) ? 1.0 : 0.0;
  }
  for (int k = 2; k <= order; ++k) {
    for (int j = 0; j <= order - k; ++j) {
      const double u = x - j;
      vals[j] = (u * vals[j] + (k - u) * vals[j + 1]) / (k - 1);
    }
  }
  return vals[0];
}

// CDF of the sum of r iid U[0,1]: F(x) = sum_{k>=0} M_{r+1}(x - k), a short
// nonnegative sum (the alternating Irwin-Hall closed form loses all double
// precision near the centre already at r ~ 13).
inline double irwin_hall_cdf(int r, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= static_cast<double>(r)) return 1.0;
  double acc = 0.0;
  for (int k = 0; k <= static_cast<int>(std::floor(x)); ++k)
    acc += bspline(r + 1, x - k);
  return acc;
}

}  // namespace detail

// Direct piecewise-polynomial evaluation of the convolution construction:
// chi(t) = F((t+a)/w + r/2) - F((t-a)/w + r/2) with a = Y - Delta/2 and
// w = Delta/r, F the CDF of a sum of r uniforms. Exact up to ~2e-15; the
// plateau and the zero region are hit exactly.
inline double chi_exact(const BumpSpec& spec, double t) {
  if (!std::isfinite(t)) throw Error("chi_exact: t must be finite");
  const double w = spec.Delta / spec.r;
  const double a = spec.Y - 0.5 * spec.Delta;
  double u = frac(t);
  if (u > 0.5) u -= 1.0;
  const double half_r = 0.5 * spec.r;
  return detail::irwin_hall_cdf(spec.r, (u + a) / w + half_r) -
         detail::irwin_hall_cdf(spec.r, (u - a) / w + half_r);
}

}  // namespace pstl
