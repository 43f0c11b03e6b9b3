#pragma once

#include <cmath>

#include "pstl/common.hpp"

namespace pstl {

// Gamma(z) by the classic 9-term Lanczos partial-fraction approximation with
// g = 7 (Godfrey's coefficients). Tested against a 256-bit reference to stay
// within 1e-13 relative on [1, 4], comfortably inside the 1e-12 budget the
// main-term evaluator assumes.
inline double gamma_lanczos(double z) {
  if (!(z > 0.5)) throw Error("gamma_lanczos: supported domain is z > 1/2");
  static const double kG = 7.0;
  static const double kCoef[9] = {
      0.99999999999980993,
      676.5203681218851,
      -1259.1392167224028,
      771.32342877765313,
      -176.61502916214059,
      12.507343278686905,
      -0.13857109526572012,
      9.9843695780195716e-6,
      1.5056327351493116e-7,
  };
  double a = kCoef[0];
  for (int k = 1; k < 9; ++k) a += kCoef[k] / (z - 1.0 + k);
  const double t = z + kG - 0.5;
  static const double kSqrtTwoPi = 2.5066282746310005024157652848110;
  return kSqrtTwoPi * std::pow(t, z - 0.5) * std::exp(-t) * a;
}

}  // namespace pstl
