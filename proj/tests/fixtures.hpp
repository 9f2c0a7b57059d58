#pragma once

#include "orthotoric/metric_zoo.hpp"

#include <random>
#include <vector>

namespace fixtures {

using namespace orthotoric;

inline Rectangle standard_box() {
  Rectangle r;
  r.x = {1.2, 1.9};
  r.y = {0.2, 1.0};
  r.z = {0.0, 1.0};
  r.t = {0.0, 1.0};
  return r;
}

/// F = x² + 1, G = 2 − y: not hyperkähler.
inline OrthotoricParams generic_params() {
  OrthotoricParams p;
  p.F.coeffs = {1.0, 0.0, 1.0};
  p.G.coeffs = {2.0, -1.0};
  p.domain = standard_box();
  return p;
}

inline OrthotoricParams hk_params(double c, double a, double b1, double b2, Rectangle box = standard_box()) {
  return hyperkahler_profiles(HyperkahlerParams{c, a, b1, b2}, box);
}

inline MetricFamily generic_family() { return OrthotoricFamily{generic_params()}; }
inline MetricFamily hk_family(double c, double a, double b1, double b2) {
  return OrthotoricFamily{hk_params(c, a, b1, b2)};
}

/// Uniform points in the interior of `box`, deterministic for a given seed.
inline std::vector<Point> sample_points(const Rectangle& box, int n, unsigned seed = 7) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  const auto draw = [&rng](std::array<double, 2> ab) {
    std::uniform_real_distribution<double> u(ab[0] + 0.02 * (ab[1] - ab[0]), ab[1] - 0.02 * (ab[1] - ab[0]));
    return u(rng);
  };
  for (int i = 0; i < n; ++i) out.emplace_back(draw(box.x), draw(box.y), draw(box.z), draw(box.t));
  return out;
}

}  // namespace fixtures
