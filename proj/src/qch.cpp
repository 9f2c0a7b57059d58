#include "orthotoric/qch.hpp"

#include <cmath>
#include <numbers>

namespace orthotoric {

namespace {

constexpr double kRicciFlat = 1e-8;
constexpr double kRicciCurved = 1e-3;
constexpr double kPhiConstant = 1e-8;

double max_abs(const Tensor4<double>& t) {
  double m = 0.0;
  for (double v : t.c) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

double holomorphic_curvature(const CurvatureD& curv, const Eigen::Matrix4d& J, const Eigen::Vector4d& X) {
  const double norm2 = X.dot(curv.g * X);
  if (!(std::abs(norm2 - 1.0) <= 1e-12)) throw Error(ErrorCode::kInvalidArgument, "holomorphic curvature needs |X| = 1");
  const Eigen::Vector4d JX = J * X;
  double K = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) K += curv.riemann(i, j, k, l) * X(i) * JX(j) * JX(k) * X(l);
  return K;
}

Eigen::Vector4d split_vector(const Frame& frame, double r, double s, double u) {
  const Eigen::Matrix4d E = frame.E_values();
  const double q = std::sqrt(std::max(0.0, 1.0 - r * r));
  return r * (std::cos(s) * E.col(0) + std::sin(s) * E.col(2)) + q * (std::cos(u) * E.col(1) + std::sin(u) * E.col(3));
}

QCHResult qch_test(const MetricFamily& family, const std::vector<Point>& points, const std::vector<double>& r_values,
                   int phases, bool keep_samples) {
  if (phases < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one phase sample");
  const int ns = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(phases)))));
  const int nu = (phases + ns - 1) / ns;
  QCHResult out;
  bool first = true;
  for (const Point& p : points) {
    const Frame fr = frame_at(family, p);
    if (fr.degenerate) {
      ++out.skipped;
      continue;
    }
    ++out.evaluated;
    const CurvatureD curv = curvature_at(family, p);
    const Eigen::Matrix4d J = complex_structure_J(fr).value();
    for (double r : r_values) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (int k = 0; k < phases; ++k) {
        const double s = 2.0 * std::numbers::pi * (k % ns) / ns;
        const double u = 2.0 * std::numbers::pi * (k / ns) / nu;
        const Eigen::Vector4d X = split_vector(fr, r, s, u);
        const double K = holomorphic_curvature(curv, J, X);
        out.j_invariance = std::max(out.j_invariance, std::abs(K - holomorphic_curvature(curv, J, J * X)));
        lo = std::min(lo, K);
        hi = std::max(hi, K);
        if (keep_samples) out.samples.push_back({p, X, r, K});
      }
      if (first || hi - lo > out.max_spread) {
        out.max_spread = hi - lo;
        out.worst_point = p;
        out.worst_r = r;
        first = false;
      }
    }
  }
  return out;
}

std::string_view to_string(SurfaceLabel label) {
  switch (label) {
    case SurfaceLabel::kFlat: return "FLAT";
    case SurfaceLabel::kHyperkahlerAllOrthotoric: return "HYPERKAHLER_ALL_ORTHOTORIC";
    case SurfaceLabel::kHyperkahlerUniqueOrthotoric: return "HYPERKAHLER_UNIQUE_ORTHOTORIC";
    case SurfaceLabel::kHyperkahlerCalabi: return "HYPERKAHLER_CALABI";
    case SurfaceLabel::kGenericOrthotoric: return "GENERIC_ORTHOTORIC";
    case SurfaceLabel::kContradiction: return "CONTRADICTION";
  }
  return "CONTRADICTION";
}

Classification classify(const MetricFamily& family, const std::vector<Point>& grid) {
  if (std::holds_alternative<PerturbedFamily>(family)) {
    throw Error(ErrorCode::kInvalidArgument, "classification needs an orthotoric or flat family");
  }
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty classification grid");
  Classification out;
  for (const Point& p : grid) {
    const CurvatureD curv = curvature_at(family, p);
    const Frame fr = frame_at(family, p);
    const Eigen::Matrix4d E = fr.E_values();
    out.ricci_max = std::max(out.ricci_max, (E.transpose() * curv.ricci * E).cwiseAbs().maxCoeff());
    out.riemann_max = std::max(out.riemann_max, max_abs(on_basis(curv.riemann, E)));
    if (fr.has_angle) out.phi_gradient_max = std::max(out.phi_gradient_max, angle_constancy_sample(fr).phi_gradient_norm);
  }

  if (std::holds_alternative<FlatFamily>(family)) {
    out.label = out.riemann_max <= kRicciFlat ? SurfaceLabel::kFlat : SurfaceLabel::kContradiction;
    out.reason = out.label == SurfaceLabel::kFlat ? "Euclidean metric" : "flat family with nonzero curvature";
    return out;
  }

  const auto& params = std::get<OrthotoricFamily>(family).params;
  const auto shape = match_hyperkahler_shape(params.F, params.G);
  out.hyperkahler_shape = shape.has_value();
  const bool ricci_flat = out.ricci_max <= kRicciFlat;
  const bool curved = out.ricci_max > kRicciCurved;

  if (!ricci_flat && !curved) {
    out.reason = "Ricci norm between the flat and curved thresholds";
  } else if (ricci_flat && !shape) {
    out.reason = "Ricci-flat but the profiles are not of hyperkähler shape";
  } else if (curved && shape) {
    out.reason = "hyperkähler-shaped profiles with nonzero Ricci curvature";
  } else if (curved) {
    out.label = SurfaceLabel::kGenericOrthotoric;
    out.reason = "Ricci curvature nonzero";
  } else if (out.phi_gradient_max <= kPhiConstant) {
    out.label = SurfaceLabel::kHyperkahlerCalabi;
    out.reason = "Ricci-flat with constant angle";
  } else if (shape->c == 0.0) {
    out.label = SurfaceLabel::kHyperkahlerAllOrthotoric;
    out.reason = "Ricci-flat with c = 0";
  } else {
    out.label = SurfaceLabel::kHyperkahlerUniqueOrthotoric;
    out.reason = "Ricci-flat with c != 0";
  }
  return out;
}

}  // namespace orthotoric
