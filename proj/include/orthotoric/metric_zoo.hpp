#pragma once

// Explicit metric families on the chart and their distinguished frames.
//
//   orthotoric:  g = (x−y)(dx²/F(x) + dy²/G(y))
//                  + (x−y)⁻¹ (F(x)(dz − y dt)² + G(y)(dz − x dt)²)
//   hyperkähler: the orthotoric family with F = c x² + 2a x + b₂,
//                G = −c y² − 2a y + b₁
//   flat:        the Euclidean metric in (x, y, z, t)
//   perturbed:   an orthotoric metric plus ε x² in the (z, t) slot, used as a
//                negative control for the holomorphic-curvature test.

#include "orthotoric/chart.hpp"

#include <array>
#include <optional>
#include <variant>
#include <vector>

namespace orthotoric {

/// Polynomial with coefficients lowest degree first.
struct Polynomial {
  std::vector<double> coeffs;

  template <typename S>
  S operator()(const S& x) const {
    S acc(0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + S(*it);
    return acc;
  }

  [[nodiscard]] Polynomial derivative() const;
  /// Degree after dropping trailing zeros; −1 for the zero polynomial.
  [[nodiscard]] int degree() const;
  [[nodiscard]] double coefficient(std::size_t k) const { return k < coeffs.size() ? coeffs[k] : 0.0; }

  friend bool operator==(const Polynomial& a, const Polynomial& b);
};

/// Closed coordinate box [lo, hi] per axis.
struct Rectangle {
  std::array<double, 2> x{0.0, 1.0};
  std::array<double, 2> y{0.0, 1.0};
  std::array<double, 2> z{0.0, 1.0};
  std::array<double, 2> t{0.0, 1.0};

  [[nodiscard]] std::array<double, 2> axis(int i) const;
  [[nodiscard]] bool contains(const Eigen::Vector4d& p) const;
};

struct OrthotoricParams {
  Polynomial F;
  Polynomial G;
  Rectangle domain;

  /// Throws DomainError unless x > y, F > 0 and G > 0 hold on the rectangle
  /// (checked on a 32×32 sub-grid including corners).
  void validate() const;
  /// Pointwise admissibility: inside the rectangle, x > y, F(x) > 0, G(y) > 0.
  [[nodiscard]] bool admits(const Eigen::Vector4d& p) const;
};

struct HyperkahlerParams {
  double c = 0.0;
  double a = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
};

/// F(x) = c x² + 2a x + b₂, G(y) = −c y² − 2a y + b₁ on `domain`; throws
/// DomainError when either profile fails to be positive there.
OrthotoricParams hyperkahler_profiles(const HyperkahlerParams& hk, const Rectangle& domain);

/// Whether (F, G) has the hyperkähler shape; recovers (c, a, b₁, b₂) if so.
std::optional<HyperkahlerParams> match_hyperkahler_shape(const Polynomial& F, const Polynomial& G,
                                                         double tol = 1e-12);

// ---------------------------------------------------------------------------
// Families.

struct OrthotoricFamily {
  OrthotoricParams params;

  template <typename S>
  Mat4<S> metric(const Vec4<S>& p) const {
    const S& x = p(0);
    const S& y = p(1);
    const S F = params.F(x);
    const S G = params.G(y);
    const S r = x - y;
    Mat4<S> g = Mat4<S>::Zero();
    g(0, 0) = r / F;
    g(1, 1) = r / G;
    g(2, 2) = (F + G) / r;
    g(2, 3) = -(F * y + G * x) / r;
    g(3, 2) = g(2, 3);
    g(3, 3) = (F * y * y + G * x * x) / r;
    return g;
  }
  [[nodiscard]] bool admits(const Eigen::Vector4d& p) const { return params.admits(p); }
  [[nodiscard]] const Rectangle& domain() const { return params.domain; }
};

struct FlatFamily {
  Rectangle box;

  template <typename S>
  Mat4<S> metric(const Vec4<S>&) const {
    Mat4<S> g = Mat4<S>::Zero();
    for (int i = 0; i < 4; ++i) g(i, i) = S(1.0);
    return g;
  }
  [[nodiscard]] bool admits(const Eigen::Vector4d& p) const { return box.contains(p); }
  [[nodiscard]] const Rectangle& domain() const { return box; }
};

struct PerturbedFamily {
  OrthotoricFamily base;
  double epsilon = 1e-2;

  template <typename S>
  Mat4<S> metric(const Vec4<S>& p) const {
    Mat4<S> g = base.metric(p);
    const S bump = S(epsilon) * p(0) * p(0);
    g(2, 3) += bump;
    g(3, 2) += bump;
    return g;
  }
  [[nodiscard]] bool admits(const Eigen::Vector4d& p) const { return base.admits(p); }
  [[nodiscard]] const Rectangle& domain() const { return base.domain(); }
};

using MetricFamily = std::variant<FlatFamily, OrthotoricFamily, PerturbedFamily>;

bool admits(const MetricFamily& family, const Eigen::Vector4d& p);
const Rectangle& domain_of(const MetricFamily& family);

// ---------------------------------------------------------------------------
// Metric 2-jets.

/// Metric with first and second partials; dg[k] = ∂_k g, ddg[k][l] = ∂_k∂_l g.
template <typename T>
struct MetricJet {
  Mat4<T> g;
  std::array<Mat4<T>, 4> dg;
  std::array<std::array<Mat4<T>, 4>, 4> ddg;
};

using MetricAtPoint = MetricJet<double>;

template <typename T>
MetricJet<T> pack_metric_jet(const Mat4<Jet<T>>& gj) {
  MetricJet<T> m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      m.g(i, j) = gj(i, j).v;
      for (int k = 0; k < 4; ++k) {
        m.dg[k](i, j) = gj(i, j).g(k);
        for (int l = 0; l < 4; ++l) m.ddg[k][l](i, j) = gj(i, j).H(k, l);
      }
    }
  return m;
}

/// 2-jet of any family at a point over scalar T; no domain check.
template <typename T>
MetricJet<T> metric_jet(const MetricFamily& family, const Vec4<T>& p) {
  return std::visit([&](const auto& f) { return pack_metric_jet<T>(f.template metric<Jet<T>>(seed<T>(p))); },
                    family);
}

/// 2-jet at a point with the family's domain enforced.
MetricAtPoint metric_at(const MetricFamily& family, const Point& p);

/// The orthotoric metric with its full 2-jet; throws DomainError outside the domain.
MetricAtPoint orthotoric_metric(const OrthotoricParams& params, const Point& p);

/// Identity metric with vanishing jet.
MetricAtPoint flat_metric(const Point& p);

// ---------------------------------------------------------------------------
// Frames.

/// Orthonormal frame E₁..E₄ with dual coframe θ₁..θ₄ and the angle data
/// (α, φ), all as jets at one point. Index a = 0..3 stands for E₁..E₄.
struct Frame {
  Point point;
  std::array<VecJ, 4> E;
  std::array<VecJ, 4> theta;
  Jetd alpha_cos;  // α cos φ
  Jetd alpha_sin;  // α sin φ
  Jetd alpha;
  Jetd phi;
  /// False for frames with no distinguished angle (flat, perturbed).
  bool has_angle = true;
  /// φ within 1e−8 of ℤπ/2: one of α cos φ, α sin φ vanishes.
  bool degenerate = false;
  std::optional<OrthotoricParams> profiles;

  /// Columns are E₁..E₄.
  [[nodiscard]] Eigen::Matrix4d E_values() const;
  /// Rows are θ₁..θ₄.
  [[nodiscard]] Eigen::Matrix4d theta_values() const;
};

/// Distinguished frame of the orthotoric metric, with h = (x−y)^(−1/2),
/// a = √F, b = √G:
///   E₁ = h a ∂x,  E₂ = −h b ∂y,  E₃ = (h/a)(x ∂z + ∂t),  E₄ = (h/b)(y ∂z + ∂t),
///   α cos φ = a h³,  α sin φ = b h³,  so φ ∈ (0, π/2) and α = √(F+G) h³.
Frame orthotoric_frame(const OrthotoricParams& params, const Point& p);

/// Coordinate frame of the flat metric with α = 0 and no angle.
Frame flat_frame(const Point& p);

/// Frame of any family: the distinguished frame for orthotoric metrics, the
/// coordinate frame for flat space, and a Gram–Schmidt orthonormalization of
/// the base distinguished frame for perturbed metrics.
Frame frame_at(const MetricFamily& family, const Point& p);

/// Copy of `frame` with E₁ scaled by `scale` and θ₁ by 1/scale.
Frame corrupt_frame(const Frame& frame, double scale);

/// Sign of dx∧dy∧dz∧dt relative to the orientation in which (E₁, E₃, E₂, E₄)
/// is positive, i.e. in which ω_J = θ₁∧θ₃ + θ₂∧θ₄ is self-dual.
int orientation_sign(const Frame& frame);

}  // namespace orthotoric
