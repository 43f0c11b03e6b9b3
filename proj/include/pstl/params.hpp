#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pstl/common.hpp"

namespace pstl {

// Parameter schedule derived from (c, delta, X):
//   r = floor(log X)            (natural log)
//   Y = X^(-(6/17)(37/36 - c) + delta)
//   Delta = Y/5,  M = r/Delta,  H = X^((3-2c)/34)
// The effective Y used downstream is min(schedule Y, 1/2); Delta and M are
// recomputed from the effective Y so that Delta = Y/5 and M*Delta = r keep
// holding after a clamp or a Y override. Raw schedule values are retained
// for reporting.
struct Params {
  double c = 0.0;
  double delta = 0.0;
  double X = 0.0;
  std::int64_t N = 0;  // ceil(X^c) when derived from X
  int r = 0;
  double Y = 0.0;      // effective (clamped / overridden)
  double Delta = 0.0;  // Y/5 unless M overridden separately
  double M = 0.0;      // r/Delta unless overridden
  double H = 0.0;      // schedule value unless overridden

  double schedule_Y = 0.0;
  double schedule_M = 0.0;
  double schedule_H = 0.0;
  bool clamped_Y = false;
  bool from_N = false;  // derived from N rather than X
  std::vector<std::string> overrides;  // subset of {"Y", "H", "M"}
};

inline constexpr double kCMax = 37.0 / 36.0;
inline constexpr double kDeltaMax = 0.01;

namespace detail {

inline void validate_c_delta_x(double c, double delta, double X) {
  if (!(c > 1.0 && c < kCMax))
    throw Error("c out of range: the exponent must satisfy 1 < c < 37/36");
  if (!(delta > 0.0))
    throw Error("delta must be positive");
  if (delta > kDeltaMax)
    throw Error("delta must lie in (0, 0.01]; larger values void the shrinking window");
  if (!(X >= 100.0))
    throw Error("X must be at least 100");
}

}  // namespace detail

inline Params derive(double c, double delta, double X) {
  detail::validate_c_delta_x(c, delta, X);
  Params p;
  p.c = c;
  p.delta = delta;
  p.X = X;
  p.N = static_cast<std::int64_t>(std::ceil(std::pow(X, c)));
  p.r = static_cast<int>(std::floor(std::log(X)));
  const double y_exp = -(6.0 / 17.0) * (37.0 / 36.0 - c) + delta;
  p.schedule_Y = std::pow(X, y_exp);
  p.schedule_M = static_cast<double>(p.r) / (p.schedule_Y / 5.0);
  p.schedule_H = std::pow(X, (3.0 - 2.0 * c) / 34.0);

  p.clamped_Y = p.schedule_Y > 0.5;
  p.Y = p.clamped_Y ? 0.5 : p.schedule_Y;
  p.Delta = p.Y / 5.0;
  p.M = static_cast<double>(p.r) / p.Delta;
  p.H = p.schedule_H;
  return p;
}

inline Params derive_from_n(double c, double delta, std::int64_t N) {
  if (N < 2) throw Error("N must be at least 2");
  Params p = derive(c, delta, std::pow(static_cast<double>(N), 1.0 / c));
  p.N = N;
  p.from_N = true;
  return p;
}

struct Overrides {
  std::optional<double> y;
  std::optional<double> h;
  std::optional<double> m;
};

inline Params with_overrides(const Params& base, const Overrides& ov) {
  Params p = base;
  if (ov.y) {
    if (!(*ov.y > 0.0 && *ov.y <= 0.5))
      throw Error("Y must lie in (0, 1/2]");
    p.Y = *ov.y;
    p.Delta = p.Y / 5.0;
    p.M = static_cast<double>(p.r) / p.Delta;
    p.clamped_Y = false;
    p.overrides.push_back("Y");
  }
  if (ov.h) {
    if (!(*ov.h >= 3.0)) throw Error("H must be at least 3");
    p.H = *ov.h;
    p.overrides.push_back("H");
  }
  if (ov.m) {
    if (!(*ov.m >= 1.0)) throw Error("M must be at least 1");
    p.M = *ov.m;
    p.overrides.push_back("M");
  }
  return p;
}

inline nlohmann::json to_json(const Params& p) {
  return nlohmann::json{{"c", p.c},
                        {"delta", p.delta},
                        {"X", p.X},
                        {"N", p.N},
                        {"r", p.r},
                        {"Y", p.Y},
                        {"Delta", p.Delta},
                        {"M", p.M},
                        {"H", p.H},
                        {"overrides", p.overrides},
                        {"schedule_Y", p.schedule_Y},
                        {"schedule_M", p.schedule_M},
                        {"schedule_H", p.schedule_H},
                        {"clamped_Y", p.clamped_Y},
                        {"from_N", p.from_N}};
}

inline Params params_from_json(const nlohmann::json& j) {
  Params p;
  p.c = j.at("c").get<double>();
  p.delta = j.at("delta").get<double>();
  p.X = j.at("X").get<double>();
  p.N = j.at("N").get<std::int64_t>();
  p.r = j.at("r").get<int>();
  p.Y = j.at("Y").get<double>();
  p.Delta = j.at("Delta").get<double>();
  p.M = j.at("M").get<double>();
  p.H = j.at("H").get<double>();
  p.overrides = j.at("overrides").get<std::vector<std::string>>();
  p.schedule_Y = j.at("schedule_Y").get<double>();
  p.schedule_M = j.at("schedule_M").get<double>();
  p.schedule_H = j.at("schedule_H").get<double>();
  p.clamped_Y = j.value("clamped_Y", false);
  p.from_N = j.value("from_N", false);
  return p;
}

}  // namespace pstl
