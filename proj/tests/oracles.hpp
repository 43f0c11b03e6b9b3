// Independent reference computations for the test suites: a 256-bit MPFR
// route for floor powers, gamma and the parameter schedule, a naive sieve,
// and a direct triple-loop representation counter. None of these share code
// with the library paths they check.
#pragma once

#include <mpfr.h>

#include <cstdint>
#include <vector>

namespace oracle {

inline constexpr int kBits = 256;

inline std::int64_t floor_power(std::uint64_t p, double c) {
  mpfr_t v;
  mpfr_init2(v, kBits);
  mpfr_set_ui(v, p, MPFR_RNDN);
  mpfr_log(v, v, MPFR_RNDN);
  mpfr_mul_d(v, v, c, MPFR_RNDN);
  mpfr_exp(v, v, MPFR_RNDN);
  mpfr_floor(v, v);
  const std::int64_t out = static_cast<std::int64_t>(mpfr_get_sj(v, MPFR_RNDZ));
  mpfr_clear(v);
  return out;
}

inline double gamma(double z) {
  mpfr_t v;
  mpfr_init2(v, kBits);
  mpfr_set_d(v, z, MPFR_RNDN);
  mpfr_gamma(v, v, MPFR_RNDN);
  const double out = mpfr_get_d(v, MPFR_RNDN);
  mpfr_clear(v);
  return out;
}

// Gamma(1 + 1/c)^3 / Gamma(3/c) * N^(3/c - 1), entirely at 256 bits.
inline double main_term(std::int64_t N, double c) {
  mpfr_t cc, g1, g3, e, out;
  mpfr_inits2(kBits, cc, g1, g3, e, out, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_d(cc, c, MPFR_RNDN);

  mpfr_ui_div(g1, 1, cc, MPFR_RNDN);
  mpfr_add_ui(g1, g1, 1, MPFR_RNDN);
  mpfr_gamma(g1, g1, MPFR_RNDN);
  mpfr_pow_ui(g1, g1, 3, MPFR_RNDN);

  mpfr_ui_div(g3, 3, cc, MPFR_RNDN);
  mpfr_gamma(g3, g3, MPFR_RNDN);

  mpfr_ui_div(e, 3, cc, MPFR_RNDN);
  mpfr_sub_ui(e, e, 1, MPFR_RNDN);
  mpfr_set_sj(out, N, MPFR_RNDN);
  mpfr_pow(out, out, e, MPFR_RNDN);

  mpfr_mul(out, out, g1, MPFR_RNDN);
  mpfr_div(out, out, g3, MPFR_RNDN);
  const double res = mpfr_get_d(out, MPFR_RNDN);
  mpfr_clears(cc, g1, g3, e, out, static_cast<mpfr_ptr>(nullptr));
  return res;
}

// Schedule quantities recomputed from exact rationals at 256 bits.
struct Schedule {
  double Y = 0.0;
  double H = 0.0;
};

inline Schedule schedule(double c, double delta, double X) {
  mpfr_t cc, ey, lx, y, h;
  mpfr_inits2(kBits, cc, ey, lx, y, h, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_d(cc, c, MPFR_RNDN);

  // ey = -(6/17)(37/36 - c) + delta
  mpfr_set_ui(ey, 37, MPFR_RNDN);
  mpfr_div_ui(ey, ey, 36, MPFR_RNDN);
  mpfr_sub(ey, ey, cc, MPFR_RNDN);
  mpfr_mul_ui(ey, ey, 6, MPFR_RNDN);
  mpfr_div_ui(ey, ey, 17, MPFR_RNDN);
  mpfr_neg(ey, ey, MPFR_RNDN);
  mpfr_add_d(ey, ey, delta, MPFR_RNDN);

  mpfr_set_d(lx, X, MPFR_RNDN);
  mpfr_log(lx, lx, MPFR_RNDN);
  mpfr_mul(y, ey, lx, MPFR_RNDN);
  mpfr_exp(y, y, MPFR_RNDN);

  // h exponent = (3 - 2c)/34
  mpfr_set_ui(h, 3, MPFR_RNDN);
  mpfr_sub(h, h, cc, MPFR_RNDN);
  mpfr_sub(h, h, cc, MPFR_RNDN);
  mpfr_div_ui(h, h, 34, MPFR_RNDN);
  mpfr_mul(h, h, lx, MPFR_RNDN);
  mpfr_exp(h, h, MPFR_RNDN);

  Schedule out{mpfr_get_d(y, MPFR_RNDN), mpfr_get_d(h, MPFR_RNDN)};
  mpfr_clears(cc, ey, lx, y, h, static_cast<mpfr_ptr>(nullptr));
  return out;
}

inline std::vector<std::uint64_t> naive_primes(std::uint64_t limit) {
  std::vector<bool> comp(limit + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) comp[j] = true;
  }
  return out;
}

// Ordered-triple counts for every target at once: one pass over all index
// triples of (entries, weights). Cubic and deliberately naive.
inline std::vector<double> brute_force_counts(const std::vector<std::int64_t>& n,
                                              const std::vector<double>& w) {
  std::int64_t maxn = 0;
  for (auto v : n) maxn = std::max(maxn, v);
  std::vector<double> counts(static_cast<std::size_t>(3 * maxn) + 1, 0.0);
  for (std::size_t i = 0; i < n.size(); ++i)
    for (std::size_t j = 0; j < n.size(); ++j)
      for (std::size_t k = 0; k < n.size(); ++k)
        counts[static_cast<std::size_t>(n[i] + n[j] + n[k])] += w[i] * w[j] * w[k];
  return counts;
}

}  // namespace oracle
