#pragma once

// Holomorphic sectional curvature sampled over the unit vectors with a fixed
// component in D = span{E₁, E₃}, and a classification of families.

#include "orthotoric/symmetry.hpp"

#include <string_view>
#include <vector>

namespace orthotoric {

/// R(X, JX, JX, X) for a unit vector X; throws Error(kInvalidArgument) when
/// |X| differs from 1 by more than 1e−12.
double holomorphic_curvature(const CurvatureD& curv, const Eigen::Matrix4d& J, const Eigen::Vector4d& X);

struct QCHSample {
  Point point;
  Eigen::Vector4d X;
  double r = 0.0;  // |X_D|
  double K = 0.0;
};

/// X = r(cos s E₁ + sin s E₃) + √(1−r²)(cos u E₂ + sin u E₄).
Eigen::Vector4d split_vector(const Frame& frame, double r, double s, double u);

struct QCHResult {
  double max_spread = 0.0;  // max over (p, r) of max K − min K
  Point worst_point;
  double worst_r = 0.0;
  double j_invariance = 0.0;  // max |K(X) − K(JX)|
  int evaluated = 0;
  int skipped = 0;  // degenerate frames
  std::vector<QCHSample> samples;
};

/// For each point and each r, `phases` vectors on a deterministic (s, u)
/// lattice. Frames flagged degenerate are skipped. Samples are kept only
/// when `keep_samples` is set.
QCHResult qch_test(const MetricFamily& family, const std::vector<Point>& points, const std::vector<double>& r_values,
                   int phases, bool keep_samples = false);

enum class SurfaceLabel {
  kFlat,
  kHyperkahlerAllOrthotoric,
  kHyperkahlerUniqueOrthotoric,
  kHyperkahlerCalabi,
  kGenericOrthotoric,
  kContradiction,
};

std::string_view to_string(SurfaceLabel label);

struct Classification {
  SurfaceLabel label = SurfaceLabel::kContradiction;
  double ricci_max = 0.0;      // max |Ric(E_a, E_b)|
  double riemann_max = 0.0;    // max |R(E_a, E_b, E_c, E_d)|
  double phi_gradient_max = 0.0;
  bool hyperkahler_shape = false;
  std::string reason;
};

/// Thresholds: Ricci ≤ 1e−8 is flat, > 1e−3 is not, anything between is a
/// contradiction; ‖dφ‖ ≤ 1e−8 everywhere means φ is constant.
Classification classify(const MetricFamily& family, const std::vector<Point>& grid);

}  // namespace orthotoric
