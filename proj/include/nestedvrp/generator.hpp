#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "nestedvrp/core.hpp"

namespace nvrp {

enum class Pattern { Uniform, SingleCenter, DoubleCenter };

inline const char* to_string(Pattern p) {
  switch (p) {
    case Pattern::Uniform: return "u";
    case Pattern::SingleCenter: return "sc";
    case Pattern::DoubleCenter: return "dc";
  }
  return "?";
}

inline Pattern pattern_from_string(const std::string& s) {
  if (s == "u" || s == "uniform") return Pattern::Uniform;
  if (s == "sc" || s == "single-center" || s == "singlecenter") return Pattern::SingleCenter;
  if (s == "dc" || s == "double-center" || s == "doublecenter") return Pattern::DoubleCenter;
  throw ParameterError("unknown pattern '" + s + "' (expected u, sc or dc)");
}

struct GenSpec {
  Pattern pattern = Pattern::Uniform;
  int n = 20;  // non-depot locations
  double alpha = 1.0;
  std::uint64_t seed = 0;
  double obs_max = 250.0;
  // overrides; the benchmark defaults apply when unset
  std::optional<double> drone_speed;
  std::optional<double> battery;
  std::optional<double> swap_time;
};

inline constexpr double kClusterSigma = 25.0;
inline constexpr double kClusterRadius = 50.0;

inline std::pair<std::pair<double, double>, std::pair<double, double>> pattern_centers() {
  return {{-50.0, 50.0}, {150.0, 50.0}};
}

namespace detail {

inline std::pair<double, double> around(std::mt19937_64& rng, double cx, double cy) {
  std::normal_distribution<double> radial(0.0, kClusterSigma);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double r = std::abs(radial(rng));
  while (r > kClusterRadius) r = std::abs(radial(rng));
  const double a = angle(rng);
  return {cx + r * std::cos(a), cy + r * std::sin(a)};
}

inline std::pair<double, double> draw_point(std::mt19937_64& rng, Pattern pattern) {
  switch (pattern) {
    case Pattern::Uniform: {
      std::uniform_int_distribution<int> coord(0, 100);
      const double x = coord(rng);
      return {x, static_cast<double>(coord(rng))};
    }
    case Pattern::SingleCenter: return around(rng, 50.0, 50.0);
    case Pattern::DoubleCenter: {
      std::bernoulli_distribution side(0.5);
      const auto [a, b] = pattern_centers();
      const auto c = side(rng) ? b : a;
      return around(rng, c.first, c.second);
    }
  }
  return {0.0, 0.0};
}

}  // namespace detail

inline Instance generate(const GenSpec& spec) {
  if (spec.n < 1) throw ParameterError("n must be at least 1");
  if (!(spec.alpha >= 1.0)) throw ParameterError("alpha must be at least 1");
  if (!(spec.obs_max >= 0.0)) throw ParameterError("obs_max must be non-negative");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> obs(0.0, spec.obs_max);
  Instance inst;
  inst.id = std::string(to_string(spec.pattern)) + "-n" + std::to_string(spec.n) + "-a" +
            std::to_string(static_cast<int>(spec.alpha)) + "-s" + std::to_string(spec.seed);
  inst.drone_speed = spec.drone_speed.value_or(30.0);
  inst.truck_speed = inst.drone_speed / spec.alpha;
  inst.battery = spec.battery.value_or(900.0);
  inst.swap_time = spec.swap_time.value_or(100.0);
  inst.unit_scale = 100.0;
  for (int i = 0; i <= spec.n; ++i) {
    const auto [x, y] = detail::draw_point(rng, spec.pattern);
    const double o = i == 0 ? 0.0 : obs(rng);
    inst.locations.push_back({i, x, y, o});
  }
  return inst;
}

}  // namespace nvrp
