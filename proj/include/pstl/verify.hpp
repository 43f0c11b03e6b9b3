#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pstl/common.hpp"
#include "pstl/expsums.hpp"
#include "pstl/params.hpp"
#include "pstl/primes.hpp"
#include "pstl/report.hpp"
#include "pstl/representations.hpp"
#include "pstl/smoothing.hpp"

namespace pstl {

// Bundled invariant suite over every module. Assertive checks are exact or
// certified identities and the bump / expansion shape properties; anything
// guarded by an unknowable implied constant is recorded report-only.
struct VerifyConfig {
  double c = 1.02;
  double delta = 0.001;
  double X = 2000.0;
  int workers = 0;
  std::uint64_t seed = kDefaultSeed;
  int grid = 4096;  // sup-scan grid; the stability probe doubles it
};

namespace detail {

inline void push(Report& rep, std::string name, double measured, double reference,
                 double tolerance, bool report_only, std::string note = "") {
  CheckRecord rec;
  rec.name = std::move(name);
  rec.measured = measured;
  rec.reference = reference;
  rec.tolerance = tolerance;
  rec.report_only = report_only;
  rec.passed = report_only || std::abs(measured - reference) <= tolerance;
  rec.note = std::move(note);
  rep.checks.push_back(rec);
}

inline void push_le(Report& rep, std::string name, double measured, double bound,
                    bool report_only, std::string note = "") {
  CheckRecord rec;
  rec.name = std::move(name);
  rec.measured = measured;
  rec.reference = bound;
  rec.tolerance = 0.0;
  rec.report_only = report_only;
  rec.passed = report_only || measured <= bound;
  rec.note = std::move(note);
  rep.checks.push_back(rec);
}

}  // namespace detail

inline Report run_verify_all(const VerifyConfig& cfg) {
  using detail::push;
  using detail::push_le;
  const auto t0 = std::chrono::steady_clock::now();

  Report rep;
  rep.seed = cfg.seed;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const Params p = derive(cfg.c, cfg.delta, cfg.X);
  rep.params_echo = to_json(p);

  // ---- params ----
  push(rep, "params/delta-is-fifth-of-Y", std::abs(p.Delta - p.Y / 5.0), 0.0,
       std::ldexp(p.Delta, -50), false);
  push(rep, "params/m-delta-identity", std::abs(p.M * p.Delta - p.r), 0.0,
       std::ldexp(static_cast<double>(p.r), -50), false);
  push_le(rep, "params/clamp-effective-Y", p.Y, 0.5, false);
  {
    const Params back = params_from_json(to_json(p));
    const bool same = back.c == p.c && back.delta == p.delta && back.X == p.X &&
                      back.N == p.N && back.r == p.r && back.Y == p.Y &&
                      back.Delta == p.Delta && back.M == p.M && back.H == p.H &&
                      back.schedule_Y == p.schedule_Y && back.schedule_M == p.schedule_M &&
                      back.schedule_H == p.schedule_H && back.clamped_Y == p.clamped_Y &&
                      back.overrides == p.overrides;
    push(rep, "params/json-roundtrip", same ? 0.0 : 1.0, 0.0, 0.0, false);
  }

  // ---- primes ----
  const PrimeTable table = sieve(cfg.X, cfg.workers);
  const auto& recs = table.records();
  {
    std::size_t mismatches = 0;
    const std::size_t sample = std::max<std::size_t>(1, table.size() / 100);
    for (std::size_t s = 0; s < sample; ++s) {
      const std::size_t i = static_cast<std::size_t>(rng() % table.size());
      if (!is_prime_u64(recs[i].p)) ++mismatches;
    }
    push(rep, "primes/sample-primality", static_cast<double>(mismatches), 0.0, 0.0, false);
  }
  {
    double worst = 0.0;
    for (const auto& r : recs) {
      const double s = std::sqrt(static_cast<double>(r.p));
      const double naive = std::abs(s - std::round(s));
      worst = std::max(worst, std::abs(naive - r.sqrt_dist));
    }
    push_le(rep, "primes/sqrt-dist-two-routes", worst, 1e-12, false);
  }
  {
    std::size_t prev = 0;
    bool monotone = true;
    for (double y : {0.05, 0.1, 0.2, 0.35, 0.5}) {
      const std::size_t n = near_square_subset(table, y).size();
      if (n < prev) monotone = false;
      prev = n;
    }
    push(rep, "primes/subset-nesting", monotone ? 0.0 : 1.0, 0.0, 0.0, false);
    const double fraction =
        static_cast<double>(near_square_subset(table, 0.1).size()) / table.size();
    push(rep, "primes/near-square-density", fraction, 0.2, 0.0, true,
         "equidistribution predicts 2Y");
  }

  // ---- smoothing ----
  const BumpSpec spec = bump_from_params(p);
  const double g0 = fourier_coeff(spec, 0);
  {
    double range_lo = 0.0, range_hi = 0.0, plateau = 0.0, zero = 0.0;
    const int K = 4096;
    for (int k = 0; k < K; ++k) {
      const double t = static_cast<double>(k) / K;
      const double v = chi_exact(spec, t);
      range_lo = std::min(range_lo, v);
      range_hi = std::max(range_hi, v - 1.0);
      const double tn = std::min(t, 1.0 - t);
      if (tn <= spec.Y - spec.Delta) plateau = std::max(plateau, std::abs(v - 1.0));
      if (tn >= spec.Y) zero = std::max(zero, std::abs(v));
    }
    push_le(rep, "smoothing/range-low", -range_lo, 1e-9, false);
    push_le(rep, "smoothing/range-high", range_hi, 1e-9, false);
    push_le(rep, "smoothing/plateau", plateau, 1e-9, false);
    push_le(rep, "smoothing/zero-region", zero, 1e-9, false);
  }
  {
    const int K = 1 << 16;
    Accumulator acc;
    for (int k = 0; k < K; ++k) acc.add(chi_exact(spec, static_cast<double>(k) / K));
    push(rep, "smoothing/mean-value", acc.value() / K, g0, 1e-8, false);
  }
  {
    std::size_t viol = 0;
    for (int m = 1; m <= 10 * spec.trunc; ++m) {
      const double g = std::abs(fourier_coeff(spec, m));
      if (g > coeff_bound(spec.r, spec.Delta, m) * (1.0 + 1e-12)) ++viol;
    }
    push(rep, "smoothing/coeff-bound", static_cast<double>(viol), 0.0, 0.0, false);
  }
  {
    double worst = 0.0, sym = 0.0;
    for (int s = 0; s < 1000; ++s) {
      const double t = unit(rng);
      worst = std::max(worst, std::abs(chi(spec, t) - chi_exact(spec, t)));
      sym = std::max(sym, std::abs(chi_exact(spec, t) - chi_exact(spec, -t)));
      sym = std::max(sym, std::abs(chi_exact(spec, t) - chi_exact(spec, 1.0 - t)));
    }
    push_le(rep, "smoothing/series-vs-exact", worst, std::max(1e-8, spec.tail), false);
    push_le(rep, "smoothing/symmetry", sym, 1e-12, false);
  }

  // ---- exponential sums ----
  const FloorPowerMap fp = build_floor_powers(table, cfg.c, cfg.workers);
  const double s0 = table.theta();
  const auto w_smooth = smooth_weights(table, spec);
  const auto w_res = series_residual_weights(table, spec);
  {
    double worst_s = 0.0, worst_h = 0.0, period = 0.0, conj_sym = 0.0;
    for (int s = 0; s < 200; ++s) {
      const double a = unit(rng);
      const cplx sv = sum_S(a, table, fp);
      worst_s = std::max(worst_s, std::abs(sv) - s0);
      worst_h = std::max(worst_h, std::abs(weighted_sum(a, table, fp, w_smooth)) -
                                      std::abs(weighted_sum(0.0, table, fp, w_smooth)));
      period = std::max(period, std::abs(sum_S(a + 1.0, table, fp) - sv));
      conj_sym = std::max(conj_sym, std::abs(std::conj(sum_S(-a, table, fp)) - sv));
    }
    push_le(rep, "expsums/s-bounded-by-zero", worst_s, 1e-9 * s0, false);
    push_le(rep, "expsums/h-bounded-by-zero", worst_h, 1e-9 * s0, false);
    // alpha+1 is itself rounded at the call site, so allow the phase
    // derivative 2 pi max[p^c] times one ulp on top of the relative budget
    const double alpha_jitter =
        kTwoPi * static_cast<double>(fp.max_entry) * 2.3e-16;
    push_le(rep, "expsums/periodicity", period, (1e-12 + alpha_jitter) * s0, false);
    push_le(rep, "expsums/conjugate-symmetry", conj_sym, (1e-12 + alpha_jitter) * s0, false);
  }
  {
    // random trigonometric polynomials with known coefficients: the sampling
    // integral must recover each coefficient to near machine precision
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const int deg = 8 + static_cast<int>(rng() % 57);
      std::vector<double> coef(static_cast<std::size_t>(deg) + 1);
      for (auto& cval : coef) cval = 2.0 * unit(rng) - 1.0;
      const int K = 2 * deg + 1;
      std::vector<cplx> grid(K);
      for (int k = 0; k < K; ++k) {
        ComplexAccumulator acc;
        for (int n = 0; n <= deg; ++n)
          acc.add(coef[static_cast<std::size_t>(n)] *
                  unit_exp(static_cast<double>(n) * k / K));
        grid[static_cast<std::size_t>(k)] = acc.value();
      }
      const std::int64_t probe = static_cast<std::int64_t>(rng() % (deg + 1));
      const cplx got = integral_power_twist(grid, 1, probe, deg);
      worst = std::max(worst, std::abs(got - coef[static_cast<std::size_t>(probe)]));
    }
    push_le(rep, "expsums/trig-poly-recovery", worst, 1e-12, false);
  }
  {
    const auto spectrum = build_spectrum(table, fp, SpectrumMode::kPlain);
    const int K = static_cast<int>(2 * fp.max_entry + 1);
    const auto gs = grid_S(table, fp, K, cfg.workers);
    const double lhs = integral_abs2(gs);
    const double rhs = collision_sum(spectrum);
    push_le(rep, "expsums/parseval", std::abs(lhs - rhs) / rhs, 1e-9, false);
  }
  {
    double worst = 0.0, vmax = 0.0;
    const cplx v0 = weighted_sum(0.0, table, fp, w_res);
    for (int s = 0; s < 100; ++s) {
      const double a = unit(rng);
      const cplx va = weighted_sum(a, table, fp, w_res);
      const cplx vb = weighted_sum(a, table, fp, w_smooth) - g0 * sum_S(a, table, fp);
      worst = std::max(worst, std::abs(va - vb));
      vmax = std::max(vmax, std::abs(va));
    }
    push_le(rep, "expsums/v-two-routes", worst, 1e-6 * s0, false);
    push_le(rep, "expsums/v-zero-imag", std::abs(v0.imag()), 1e-10 * s0, false);
    Accumulator gsum;
    for (int m = 1; m <= spec.trunc; ++m) gsum.add(2.0 * std::abs(fourier_coeff(spec, m)));
    push_le(rep, "expsums/v-triangle", vmax, (gsum.value() + spec.tail) * s0, false);
  }
  {
    // mean square of V by both routes; certified Cauchy-Schwarz tolerance
    const int K = static_cast<int>(2 * fp.max_entry + 1);
    const auto va = grid_weighted(table, fp, w_res, K, cfg.workers);
    const auto gh = grid_weighted(table, fp, w_smooth, K, cfg.workers);
    const auto gs = grid_S(table, fp, K, cfg.workers);
    std::vector<cplx> vb(va.size());
    for (std::size_t k = 0; k < vb.size(); ++k) vb[k] = gh[k] - g0 * gs[k];
    const double ia = integral_abs2(va);
    const double ib = integral_abs2(vb);
    const double maxdiff = (spec.tail + 1e-9) * s0;
    const double tol = maxdiff * (std::sqrt(ia) + std::sqrt(ib));
    push_le(rep, "expsums/v-mean-square-two-routes", std::abs(ia - ib), tol, false);
  }
  {
    std::vector<double> ys(1000);
    for (std::size_t k = 0; k < ys.size(); ++k)
      ys[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(ys.size());
    const auto scan = frac_exp_residual_scan(0.5, 10.0, ys);
    push_le(rep, "expsums/frac-exp-ratio", scan.ratio_max, 10.0, false);
  }

  // ---- representations ----
  {
    // convolution counter vs direct enumeration over a small table
    const PrimeTable t200 = sieve(200.0, cfg.workers);
    const FloorPowerMap fp200 = build_floor_powers(t200, cfg.c, cfg.workers);
    const auto sp = build_spectrum(t200, fp200, SpectrumMode::kPlain);
    const TernaryCounter counter(sp);
    double worst = 0.0;
    for (std::int64_t N = 6; N <= counter.max_target(); ++N) {
      const double conv = counter.count(N);
      Accumulator enumsum;
      for (const auto& orb : enumerate_triples(t200, fp200, N, SpectrumMode::kPlain))
        enumsum.add(orb.weight);
      const double brute = enumsum.value();
      const double denom = std::max(1.0, std::max(conv, brute));
      worst = std::max(worst, std::abs(conv - brute) / denom);
    }
    push_le(rep, "reps/counter-vs-enumeration", worst, 1e-10, false);
  }
  {
    const auto sp = build_spectrum(table, fp, SpectrumMode::kSmooth, &spec);
    const TernaryCounter counter(sp);
    const int K = static_cast<int>(3 * p.N + 1);
    const auto gh = grid_weighted(table, fp, w_smooth, K, cfg.workers);
    double worst = 0.0;
    for (double fracN : {0.8, 1.5, 2.2}) {
      const std::int64_t N0 =
          static_cast<std::int64_t>(fracN * static_cast<double>(fp.max_entry));
      const double conv = counter.count(N0);
      const cplx integ = integral_power_twist(gh, 3, N0, fp.max_entry);
      worst = std::max(worst, std::abs(integ.real() - conv) / std::max(1.0, conv));
    }
    push_le(rep, "reps/inversion-identity", worst, 1e-8, false);

    const auto sp_plain = build_spectrum(table, fp, SpectrumMode::kPlain);
    push_le(rep, "reps/mass-plain", std::abs(sp_plain.mass - table.theta()) / table.theta(),
            1e-12, false);
    Accumulator smooth_mass;
    for (double w : w_smooth) smooth_mass.add(w);
    push_le(rep, "reps/mass-smooth", std::abs(sp.mass - smooth_mass.value()) /
                                         std::max(1.0, smooth_mass.value()),
            1e-12, false);
  }
  push(rep, "reps/main-term-linear-exponent", main_term(100, 1.0), 5000.0, 1e-9, false);
  {
    const auto sp = build_spectrum(table, fp, SpectrumMode::kPlain);
    const TernaryCounter counter(sp);
    const std::int64_t lo = static_cast<std::int64_t>(0.2 * 3 * fp.max_entry);
    const std::int64_t hi = static_cast<std::int64_t>(0.8 * 3 * fp.max_entry);
    const auto rows = ratio_scan(counter, cfg.c, lo, hi, std::max<std::int64_t>(1, (hi - lo) / 32));
    const auto summary = summarize_ratios(rows);
    push(rep, "reps/ratio-median", summary.median, 1.0, 0.0, true,
         "asymptotic tracking, see acceptance");
  }

  // ---- bound monitors (implied constants: report-only) ----
  {
    const auto scan1 = sup_v_scan(cfg.grid, table, fp, spec, p, cfg.workers);
    const auto scan2 = sup_v_scan(2 * cfg.grid, table, fp, spec, p, cfg.workers);
    push(rep, "bounds/sup-v-ratio", scan1.ratio, 0.0, 0.0, true, "vs seven-term majorant");
    push(rep, "bounds/sup-v-grid-stability",
         std::abs(scan2.sup_v / scan1.sup_v - 1.0), 0.0, 0.0, true);
    const auto [v1, v2] = v_split_bound_rhs(p, 1.0);
    push(rep, "bounds/v-split-first", v1, 0.0, 0.0, true);
    push(rep, "bounds/v-split-second", v2, 0.0, 0.0, true);
    const std::int64_t Nmid = static_cast<std::int64_t>(1.5 * fp.max_entry);
    const double lower_analog =
        g0 * g0 * g0 * std::pow(p.Y, 3.0) * std::pow(p.X, 3.0 - p.c);
    const double monitor = gamma_smooth(table, fp, spec, Nmid) / lower_analog;
    push_le(rep, "bounds/lower-bound-positive", -monitor, 0.0, false,
            "smoothed count over Y^3 X^(3-c) analog must stay positive");
  }

  rep.timing_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  return rep;
}

}  // namespace pstl
