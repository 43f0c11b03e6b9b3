#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pstl {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

using cplx = std::complex<double>;

// Invalid inputs and violated preconditions surface as pstl::Error with a
// message naming the offending quantity.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Neumaier-compensated accumulator. Summation order is part of the contract:
// the same sequence of add() calls yields bit-identical results everywhere.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexAccumulator {
 public:
  void add(cplx z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  Accumulator re_, im_;
};

inline double frac(double x) { return x - std::floor(x); }

// (a*b) mod 1 to ~1 ulp for |a*b| < 2^53. The fma term recovers the low half
// of the product that a plain double multiply rounds away; without it the
// phase of e(alpha*n) loses ~ulp(a*b) absolute accuracy for large n.
inline double mul_mod1(double a, double b) {
  const double p = a * b;
  const double lo = std::fma(a, b, -p);
  double f = p - std::floor(p);
  f += lo;
  f -= std::floor(f);
  return f;
}

// e(y) = exp(2*pi*i*y) for y already reduced to [0, 1).
inline cplx unit_exp_reduced(double f) {
  const double t = kTwoPi * f;
  return {std::cos(t), std::sin(t)};
}

// e(y) = exp(2*pi*i*y); reduces y mod 1 before scaling by 2*pi.
inline cplx unit_exp(double y) { return unit_exp_reduced(frac(y)); }

}  // namespace pstl
