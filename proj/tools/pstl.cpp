// Command-line front end: parameter schedules, sieving, representation
// counts, bump diagnostics, exponential-sum scans and the bundled
// verification suite. Exit codes: 0 all-pass, 1 failed assertion, 2 usage.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pstl/common.hpp"
#include "pstl/expsums.hpp"
#include "pstl/params.hpp"
#include "pstl/primes.hpp"
#include "pstl/report.hpp"
#include "pstl/representations.hpp"
#include "pstl/smoothing.hpp"
#include "pstl/verify.hpp"

namespace {

using nlohmann::json;

struct Cli {
  double c = 1.02;
  double delta = 0.001;
  double x = 0.0;
  std::int64_t n = 0;
  std::int64_t n_min = 0, n_max = 0, step = 0;
  double y = 0.0, h = 0.0, m = 0.0;
  double delta_bump = 0.0;
  int r = 0;
  double alpha = 0.0;
  std::int64_t sum_m = 0;
  std::string sum_kind = "S";
  std::string mode = "plain";
  bool list_triples = false;
  int grid = 0;
  int workers = 0;
  std::uint64_t seed = pstl::kDefaultSeed;
  std::string format = "json";
  std::string out;
  std::string cache;
  std::vector<double> x_points;
};

std::string fmt(double v) { return json(v).dump(); }

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw pstl::Error("cannot open output file " + out_path);
  f << text;
}

pstl::Params params_from_cli(const Cli& cli, bool x_given, bool n_given, bool y_given,
                             bool h_given, bool m_given) {
  if (!x_given && !n_given) throw pstl::Error("one of --x or --n is required");
  pstl::Params p = x_given ? pstl::derive(cli.c, cli.delta, cli.x)
                           : pstl::derive_from_n(cli.c, cli.delta, cli.n);
  pstl::Overrides ov;
  if (y_given) ov.y = cli.y;
  if (h_given) ov.h = cli.h;
  if (m_given) ov.m = cli.m;
  if (ov.y || ov.h || ov.m) p = pstl::with_overrides(p, ov);
  return p;
}

// Counting and sum evaluation accept any sievable X; below the schedule's
// X >= 100 domain the window and order come straight from the flags.
struct Scope {
  double c = 0.0;
  double X = 0.0;
  double Y = 0.5;
  pstl::BumpSpec bump;
};

Scope scope_from_cli(const Cli& cli, bool x_given, bool y_given) {
  if (!x_given) throw pstl::Error("--x is required");
  Scope s;
  s.c = cli.c;
  s.X = cli.x;
  s.Y = y_given ? cli.y : 0.5;
  if (!(s.Y > 0.0 && s.Y <= 0.5)) throw pstl::Error("Y must lie in (0, 1/2]");
  const int r = std::max(1, static_cast<int>(std::floor(std::log(cli.x))));
  s.bump = pstl::make_bump(s.Y, s.Y / 5.0, r);
  return s;
}

int cmd_params(const Cli& cli, const pstl::Params& p) {
  if (cli.format == "csv") {
    const json j = pstl::to_json(p);
    std::string s = "key,value\n";
    for (auto it = j.begin(); it != j.end(); ++it)
      s += it.key() + "," + it.value().dump() + "\n";
    write_output(s, cli.out);
  } else {
    write_output(pstl::to_json(p).dump(2), cli.out);
  }
  return 0;
}

int cmd_sieve(const Cli& cli) {
  const pstl::PrimeTable table = pstl::sieve(cli.x, cli.workers);
  if (!cli.cache.empty()) pstl::save_cache(table, cli.cache);
  if (cli.format == "csv") {
    std::string s = "p,logp,sqrt_dist\n";
    for (const auto& r : table.records())
      s += std::to_string(r.p) + "," + fmt(r.logp) + "," + fmt(r.sqrt_dist) + "\n";
    write_output(s, cli.out);
  } else {
    write_output(json{{"X", table.cutoff()},
                      {"count", table.size()},
                      {"theta", table.theta()},
                      {"cache", cli.cache}}
                     .dump(2),
                 cli.out);
  }
  return 0;
}

pstl::SpectrumMode parse_mode(const std::string& mode) {
  if (mode == "plain") return pstl::SpectrumMode::kPlain;
  if (mode == "smooth") return pstl::SpectrumMode::kSmooth;
  if (mode == "sharp") return pstl::SpectrumMode::kSharp;
  throw pstl::Error("unknown mode " + mode + " (expected plain, smooth or sharp)");
}

int cmd_count(const Cli& cli, const Scope& s) {
  const auto mode = parse_mode(cli.mode);
  const pstl::PrimeTable table = pstl::sieve(s.X, cli.workers);
  const pstl::FloorPowerMap fp = pstl::build_floor_powers(table, s.c, cli.workers);
  const auto spectrum = pstl::build_spectrum(table, fp, mode, &s.bump, s.Y);
  const double count = pstl::ternary_count(spectrum, cli.n);

  json out{{"c", s.c}, {"X", s.X}, {"N", cli.n}, {"mode", cli.mode}, {"count", count}};
  std::string csv = "N,mode,count\n" + std::to_string(cli.n) + "," + cli.mode + "," +
                    fmt(count) + "\n";
  if (cli.list_triples) {
    const auto orbits = pstl::enumerate_triples(table, fp, cli.n, mode, &s.bump, s.Y);
    json arr = json::array();
    csv += "p1,p2,p3,orbit,weight\n";
    for (const auto& o : orbits) {
      arr.push_back({{"p1", o.p1}, {"p2", o.p2}, {"p3", o.p3},
                     {"orbit", o.orbit}, {"weight", o.weight}});
      csv += std::to_string(o.p1) + "," + std::to_string(o.p2) + "," +
             std::to_string(o.p3) + "," + std::to_string(o.orbit) + "," +
             fmt(o.weight) + "\n";
    }
    out["triples"] = arr;
  }
  write_output(cli.format == "csv" ? csv : out.dump(2), cli.out);
  return 0;
}

int cmd_main_term(const Cli& cli) {
  if (cli.n < 1) throw pstl::Error("--n is required and must be positive");
  const double v = pstl::main_term(cli.n, cli.c);
  if (cli.format == "csv")
    write_output("N,c,main_term\n" + std::to_string(cli.n) + "," + fmt(cli.c) + "," +
                     fmt(v) + "\n",
                 cli.out);
  else
    write_output(json{{"N", cli.n}, {"c", cli.c}, {"main_term", v}}.dump(2), cli.out);
  return 0;
}

int cmd_ratio_scan(const Cli& cli, const Scope& s) {
  const auto mode = parse_mode(cli.mode);
  const pstl::PrimeTable table = pstl::sieve(s.X, cli.workers);
  const pstl::FloorPowerMap fp = pstl::build_floor_powers(table, s.c, cli.workers);
  const auto spectrum = pstl::build_spectrum(table, fp, mode, &s.bump, s.Y);
  const pstl::TernaryCounter counter(spectrum);

  std::int64_t lo = cli.n_min > 0 ? cli.n_min : counter.max_target() / 5;
  std::int64_t hi = cli.n_max > 0 ? cli.n_max : 4 * counter.max_target() / 5;
  std::int64_t step = cli.step > 0 ? cli.step : std::max<std::int64_t>(1, (hi - lo) / 32);
  const auto rows = pstl::ratio_scan(counter, s.c, lo, hi, step);
  const auto summary = pstl::summarize_ratios(rows);

  if (cli.format == "csv") {
    std::string s = "N,count,main_term,ratio\n";
    for (const auto& row : rows)
      s += std::to_string(row.N) + "," + fmt(row.count) + "," + fmt(row.main) + "," +
           fmt(row.ratio) + "\n";
    write_output(s, cli.out);
  } else {
    json arr = json::array();
    for (const auto& row : rows)
      arr.push_back({{"N", row.N}, {"count", row.count}, {"main_term", row.main},
                     {"ratio", row.ratio}});
    write_output(json{{"mode", cli.mode},
                      {"rows", arr},
                      {"summary",
                       {{"median", summary.median}, {"q1", summary.q1}, {"q3", summary.q3}}}}
                     .dump(2),
                 cli.out);
  }
  return 0;
}

int cmd_chi_check(const Cli& cli) {
  const double Y = cli.y > 0.0 ? cli.y : 0.1;
  const double D = cli.delta_bump > 0.0 ? cli.delta_bump : Y / 5.0;
  const int r = cli.r > 0 ? cli.r : 3;
  const pstl::BumpSpec spec = pstl::make_bump(Y, D, r);
  const int K = cli.grid > 0 ? cli.grid : 1024;
  const double tol = spec.tail + 1e-9;

  double plateau = 0.0, zero = 0.0, range = 0.0;
  std::string csv = "t,chi,regime\n";
  for (int k = 0; k < K; ++k) {
    const double t = static_cast<double>(k) / K;
    const double v = pstl::chi(spec, t);
    const double tn = std::min(pstl::frac(t), 1.0 - pstl::frac(t));
    const char* regime = tn <= Y - D ? "plateau" : (tn >= Y ? "zero" : "transition");
    csv += fmt(t) + "," + fmt(v) + "," + regime + "\n";
    if (tn <= Y - D) plateau = std::max(plateau, std::abs(v - 1.0));
    if (tn >= Y) zero = std::max(zero, std::abs(v));
    range = std::max(range, std::max(-v, v - 1.0));
  }
  const bool ok = plateau <= tol && zero <= tol && range <= tol;
  if (cli.format == "json") {
    write_output(json{{"Y", Y}, {"Delta", D}, {"r", r}, {"trunc", spec.trunc},
                      {"tail", spec.tail}, {"tolerance", tol},
                      {"plateau_dev", plateau}, {"zero_dev", zero}, {"range_dev", range},
                      {"pass", ok}}
                     .dump(2),
                 cli.out);
  } else {
    write_output(csv, cli.out);
    if (!ok)
      std::cerr << "chi-check: regime deviation exceeds " << tol << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_expsum(const Cli& cli, const Scope& s, bool grid_given) {
  const pstl::PrimeTable table = pstl::sieve(s.X, cli.workers);
  const pstl::FloorPowerMap fp = pstl::build_floor_powers(table, s.c, cli.workers);
  const pstl::BumpSpec& spec = s.bump;

  std::vector<std::pair<double, pstl::cplx>> rows;
  auto value_at = [&](double a) -> pstl::cplx {
    if (cli.sum_kind == "S") return pstl::sum_S(a, table, fp);
    if (cli.sum_kind == "H") return pstl::sum_H(a, table, fp, spec);
    if (cli.sum_kind == "V") return pstl::sum_V_series(a, table, fp, spec);
    if (cli.sum_kind == "U") return pstl::sum_U(a, cli.sum_m, table, fp);
    throw pstl::Error("unknown sum kind " + cli.sum_kind + " (expected S, H, V or U)");
  };
  if (grid_given) {
    const int K = cli.grid;
    if (K < 1) throw pstl::Error("--grid-points must be positive");
    if (cli.sum_kind == "S") {
      const auto vals = pstl::grid_S(table, fp, K, cli.workers);
      for (int k = 0; k < K; ++k) rows.emplace_back(static_cast<double>(k) / K, vals[k]);
    } else if (cli.sum_kind == "H") {
      const auto vals = pstl::grid_H(table, fp, spec, K, cli.workers);
      for (int k = 0; k < K; ++k) rows.emplace_back(static_cast<double>(k) / K, vals[k]);
    } else if (cli.sum_kind == "V") {
      const auto vals = pstl::grid_V_series(table, fp, spec, K, cli.workers);
      for (int k = 0; k < K; ++k) rows.emplace_back(static_cast<double>(k) / K, vals[k]);
    } else {
      for (int k = 0; k < K; ++k) {
        const double a = static_cast<double>(k) / K;
        rows.emplace_back(a, value_at(a));
      }
    }
  } else {
    rows.emplace_back(cli.alpha, value_at(cli.alpha));
  }

  if (cli.format == "json") {
    json arr = json::array();
    for (const auto& [a, v] : rows)
      arr.push_back({{"alpha", a}, {"re", v.real()}, {"im", v.imag()}, {"abs", std::abs(v)}});
    write_output(json{{"sum", cli.sum_kind}, {"rows", arr}}.dump(2), cli.out);
  } else {
    std::string s = "alpha,re,im,abs\n";
    for (const auto& [a, v] : rows)
      s += fmt(a) + "," + fmt(v.real()) + "," + fmt(v.imag()) + "," + fmt(std::abs(v)) + "\n";
    write_output(s, cli.out);
  }
  return 0;
}

int cmd_parseval(const Cli& cli, const Scope& s) {
  const pstl::PrimeTable table = pstl::sieve(s.X, cli.workers);
  const pstl::FloorPowerMap fp = pstl::build_floor_powers(table, s.c, cli.workers);
  const auto spectrum = pstl::build_spectrum(table, fp, pstl::SpectrumMode::kPlain);
  const int K = static_cast<int>(2 * fp.max_entry + 1);
  const auto grid = pstl::grid_S(table, fp, K, cli.workers);
  const double integral = pstl::integral_abs2(grid);
  const double collisions = pstl::collision_sum(spectrum);
  const double rel = std::abs(integral - collisions) / collisions;
  const bool ok = rel <= 1e-9;
  if (cli.format == "csv")
    write_output("K,integral,collision_sum,rel_diff,pass\n" + std::to_string(K) + "," +
                     fmt(integral) + "," + fmt(collisions) + "," + fmt(rel) + "," +
                     (ok ? "pass" : "fail") + "\n",
                 cli.out);
  else
    write_output(json{{"K", K}, {"integral", integral}, {"collision_sum", collisions},
                      {"rel_diff", rel}, {"tolerance", 1e-9}, {"pass", ok}}
                     .dump(2),
                 cli.out);
  return ok ? 0 : 1;
}

int cmd_lemma2_check(const Cli& cli) {
  const double H = cli.h > 0.0 ? cli.h : 10.0;
  const int K = cli.grid > 0 ? cli.grid : 1000;
  std::vector<double> xs = cli.x_points;
  if (xs.empty()) xs = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> ys(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) ys[k] = (k + 0.5) / static_cast<double>(K);

  bool ok = true;
  json arr = json::array();
  std::string csv = "x,H,ratio_max,raw_max\n";
  for (double x : xs) {
    const auto scan = pstl::frac_exp_residual_scan(x, H, ys);
    ok = ok && scan.ratio_max <= 10.0;
    arr.push_back({{"x", x}, {"H", H}, {"ratio_max", scan.ratio_max},
                   {"raw_max", scan.raw_max}});
    csv += fmt(x) + "," + fmt(H) + "," + fmt(scan.ratio_max) + "," + fmt(scan.raw_max) + "\n";
  }
  if (cli.format == "csv")
    write_output(csv, cli.out);
  else
    write_output(json{{"grid", K}, {"rows", arr}, {"ratio_bound", 10.0}, {"pass", ok}}.dump(2),
                 cli.out);
  return ok ? 0 : 1;
}

int cmd_v_bound_scan(const Cli& cli, const pstl::Params& p) {
  const pstl::PrimeTable table = pstl::sieve(p.X, cli.workers);
  const pstl::FloorPowerMap fp = pstl::build_floor_powers(table, p.c, cli.workers);
  const pstl::BumpSpec spec = pstl::bump_from_params(p);
  const int K = cli.grid > 0 ? cli.grid : 4096;
  const auto scan = pstl::sup_v_scan(K, table, fp, spec, p, cli.workers);
  write_output(json{{"grid", scan.grid}, {"sup_V", scan.sup_v},
                    {"lemma3_rhs", scan.bound_rhs}, {"ratio", scan.ratio},
                    {"H", p.H}, {"M", p.M}}
                   .dump(2),
               cli.out);
  return 0;
}

int cmd_verify_all(const Cli& cli) {
  pstl::VerifyConfig cfg;
  cfg.c = cli.c;
  cfg.delta = cli.delta;
  cfg.X = cli.x > 0.0 ? cli.x : 2000.0;
  cfg.workers = cli.workers;
  cfg.seed = cli.seed;
  if (cli.grid > 0) cfg.grid = cli.grid;
  const pstl::Report rep = pstl::run_verify_all(cfg);
  write_output(cli.format == "csv" ? rep.to_csv() : rep.to_json().dump(2), cli.out);
  return rep.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  CLI::App app{"desk-scale laboratory for ternary equations in floor powers of primes near squares"};
  app.set_version_flag("--version", pstl::kVersion);
  app.set_help_flag("--help", "print usage");  // frees -h/--h for the H override
  app.set_config("--config", "", "key=value config file; command-line flags win");
  app.fallthrough();

  app.add_option("--c", cli.c, "exponent c in (1, 37/36)");
  app.add_option("--delta", cli.delta, "schedule margin delta in (0, 0.01]");
  auto* opt_x = app.add_option("--x", cli.x, "prime cutoff X");
  auto* opt_n = app.add_option("--n", cli.n, "integer target N");
  auto* opt_y = app.add_option("--y", cli.y, "window half-width override, (0, 1/2]");
  auto* opt_h = app.add_option("--h", cli.h, "expansion length override, >= 3");
  auto* opt_m = app.add_option("--m", cli.m, "truncation scale override, >= 1");
  app.add_option("--grid-points,--grid", cli.grid, "grid size for scans");
  app.add_option("--workers", cli.workers, "worker threads (never changes numbers)")
      ->envname("PSTL_WORKERS");
  app.add_option("--seed", cli.seed, "seed for sampled checks");
  app.add_option("--format", cli.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cli.out, "write output to a file instead of stdout");

  auto* sc_params = app.add_subcommand("params", "derive and print the parameter schedule");
  auto* sc_sieve = app.add_subcommand("sieve", "sieve primes up to X");
  sc_sieve->add_option("--cache", cli.cache, "write the binary prime cache to this path");
  auto* sc_count = app.add_subcommand("count", "ternary representation count for a target N");
  sc_count->add_option("--mode", cli.mode, "plain | smooth | sharp");
  sc_count->add_flag("--list", cli.list_triples, "also enumerate multiset orbits");
  auto* sc_main = app.add_subcommand("main-term", "leading asymptotic term for (N, c)");
  auto* sc_ratio = app.add_subcommand("ratio-scan", "count / main-term ratios over an N range");
  sc_ratio->add_option("--n-min", cli.n_min, "scan start");
  sc_ratio->add_option("--n-max", cli.n_max, "scan end");
  sc_ratio->add_option("--step", cli.step, "scan step");
  sc_ratio->add_option("--mode", cli.mode, "plain | smooth | sharp");
  auto* sc_chi = app.add_subcommand("chi-check", "bump shape table and regime checks");
  sc_chi->add_option("--delta-bump", cli.delta_bump, "bump margin Delta (default Y/5)");
  sc_chi->add_option("--r", cli.r, "smoothness order");
  auto* sc_expsum = app.add_subcommand("expsum", "evaluate S, H, V or U");
  sc_expsum->add_option("--alpha", cli.alpha, "single evaluation point");
  sc_expsum->add_option("--sum", cli.sum_kind, "S | H | V | U");
  sc_expsum->add_option("--m,--sum-m", cli.sum_m, "oscillation index m for U");
  auto* sc_parseval = app.add_subcommand("parseval", "mean-square identity for S");
  auto* sc_lemma2 = app.add_subcommand("lemma2-check", "truncated expansion residual ratios");
  sc_lemma2->add_option("--x-point", cli.x_points, "expansion phases x (default five-point set)");
  auto* sc_vbound = app.add_subcommand("v-bound-scan", "sup |V| grid scan vs majorant");
  auto* sc_verify = app.add_subcommand("verify-all", "bundled invariant suite");
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto schedule = [&]() {
      return params_from_cli(cli, opt_x->count() > 0, opt_n->count() > 0,
                             opt_y->count() > 0, opt_h->count() > 0, opt_m->count() > 0);
    };
    auto scope = [&]() { return scope_from_cli(cli, opt_x->count() > 0, opt_y->count() > 0); };
    if (sc_params->parsed()) return cmd_params(cli, schedule());
    if (sc_sieve->parsed()) {
      if (opt_x->count() == 0) throw pstl::Error("--x is required");
      return cmd_sieve(cli);
    }
    if (sc_count->parsed()) {
      if (opt_n->count() == 0) throw pstl::Error("--n is required");
      return cmd_count(cli, scope());
    }
    if (sc_main->parsed()) return cmd_main_term(cli);
    if (sc_ratio->parsed()) return cmd_ratio_scan(cli, scope());
    if (sc_chi->parsed()) return cmd_chi_check(cli);
    if (sc_expsum->parsed()) return cmd_expsum(cli, scope(), cli.grid > 0);
    if (sc_parseval->parsed()) return cmd_parseval(cli, scope());
    if (sc_lemma2->parsed()) return cmd_lemma2_check(cli);
    if (sc_vbound->parsed()) {
      if (opt_x->count() == 0) throw pstl::Error("--x is required");
      return cmd_v_bound_scan(cli, schedule());
    }
    if (sc_verify->parsed()) return cmd_verify_all(cli);
    std::cerr << app.help();
    return 2;
  } catch (const pstl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
