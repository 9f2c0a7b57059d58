#pragma once

// Coordinate-chart calculus on (x, y, z, t), indices 0..3 in that order.
//
// Fields are represented two ways:
//   * generic callables `template <class S> Vec4<S> operator()(const Vec4<S>&)`
//     (generic lambdas qualify), evaluated on whatever scalar the caller seeds;
//   * pointwise jets (Vec4<Jet<double>>, Mat4<Jet<double>>) when a field has
//     already been evaluated at a point with its derivatives.
//
// Two-forms are antisymmetric 4×4 component matrices, ω(X, Y) = Xᵀ ω Y, and
// (u∧v)_ab = u_a v_b − u_b v_a. Three-forms are stored fully antisymmetrized.

#include "orthotoric/error.hpp"
#include "orthotoric/jet.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>

namespace orthotoric {

using Jetd = Jet<double>;
using VecJ = Vec4<Jetd>;
using MatJ = Mat4<Jetd>;

/// A point of the chart; coordinates must be finite.
struct Point {
  Eigen::Vector4d coords = Eigen::Vector4d::Zero();

  Point() = default;
  explicit Point(const Eigen::Vector4d& c);
  Point(double x, double y, double z, double t);

  [[nodiscard]] double x() const { return coords(0); }
  [[nodiscard]] double y() const { return coords(1); }
  [[nodiscard]] double z() const { return coords(2); }
  [[nodiscard]] double t() const { return coords(3); }
};

/// Domain predicate attached to a field or family.
using DomainPredicate = std::function<bool(const Eigen::Vector4d&)>;

/// Scalar field evaluated with exact value, gradient and Hessian.
using JetScalar = Jetd;

/// Evaluates a generic scalar field as a jet at `p`; throws DomainError when
/// `inside` rejects the point.
template <typename Field>
JetScalar eval_jet(const Field& f, const Point& p, const DomainPredicate& inside = {}) {
  if (inside && !inside(p.coords)) throw DomainError("point outside chart domain");
  return f(seed(p.coords));
}

// ---------------------------------------------------------------------------
// Three-forms.

struct ThreeForm {
  std::array<double, 64> c{};

  double& operator()(int a, int b, int d) { return c[static_cast<std::size_t>(16 * a + 4 * b + d)]; }
  [[nodiscard]] double operator()(int a, int b, int d) const {
    return c[static_cast<std::size_t>(16 * a + 4 * b + d)];
  }
  /// Components on an arbitrary basis: T(E_a, E_b, E_c).
  [[nodiscard]] ThreeForm on_basis(const Eigen::Matrix4d& basis_columns) const;
  /// Frobenius norm over independent components a < b < c.
  [[nodiscard]] double norm() const;
  ThreeForm& operator-=(const ThreeForm& o);
};

// ---------------------------------------------------------------------------
// Pointwise operations on jets.

/// E(f) = Σ Eⁱ ∂ᵢ f.
inline Jetd directional(const VecJ& field, const Jetd& f) {
  Jetd out(0.0);
  for (int i = 0; i < 4; ++i) {
    // First derivative of the product field^i * ∂_i f; second order not needed.
    Jetd df(f.g(i), f.H.row(i).transpose(), Eigen::Matrix4d::Zero());
    out += field(i) * df;
  }
  return out;
}

/// Value of E(f) only.
inline double directional_value(const VecJ& field, const Jetd& f) { return values(field).dot(f.g); }

/// Lie bracket [X, Y] at the point where the jets were evaluated.
Eigen::Vector4d lie_bracket(const VecJ& X, const VecJ& Y);

/// (dω)_ab = ∂_a ω_b − ∂_b ω_a.
Eigen::Matrix4d exterior_derivative(const VecJ& one_form);

/// (dω)_abc = ∂_a ω_bc + ∂_b ω_ca + ∂_c ω_ab.
ThreeForm exterior_derivative(const MatJ& two_form);

/// u∧v for one-form jets; the result carries first derivatives.
MatJ wedge(const VecJ& u, const VecJ& v);
Eigen::Matrix4d wedge(const Eigen::Vector4d& u, const Eigen::Vector4d& v);

/// η∧ω as a three-form.
ThreeForm wedge(const Eigen::Vector4d& eta, const Eigen::Matrix4d& omega);

/// ω∧σ for two-forms; returns the coefficient of dx∧dy∧dz∧dt.
double wedge_top(const Eigen::Matrix4d& omega, const Eigen::Matrix4d& sigma);

/// Component-wise values and Jacobians of matrix/vector jets.
Eigen::Matrix4d values(const MatJ& m);

/// ω^♯ with g(ω^♯, Y) = ω(Y); throws on a singular metric.
Eigen::Vector4d sharp(const Eigen::Vector4d& omega, const Eigen::Matrix4d& g);
/// X^♭ = g(X, ·).
Eigen::Vector4d flat(const Eigen::Vector4d& X, const Eigen::Matrix4d& g);

/// Components of a 2-form on a basis: ω(E_a, E_b).
Eigen::Matrix4d on_basis(const Eigen::Matrix4d& two_form, const Eigen::Matrix4d& basis_columns);

/// Frobenius norm of a 2-form over independent components a < b.
double two_form_norm(const Eigen::Matrix4d& two_form);

// ---------------------------------------------------------------------------
// Operations on generic field callables.

/// Evaluates a generic vector field on a point seeded with jets over scalar T.
template <typename T, typename Field>
Vec4<Jet<T>> eval_field(const Field& f, const Vec4<T>& p) {
  return f(seed<T>(p));
}

/// [X, Y] = (X·∇)Y − (Y·∇)X at p, over any scalar T (double, Dual, ...).
template <typename T, typename FX, typename FY>
Vec4<T> lie_bracket(const FX& X, const FY& Y, const Vec4<T>& p) {
  const Vec4<Jet<T>> xj = eval_field<T>(X, p);
  const Vec4<Jet<T>> yj = eval_field<T>(Y, p);
  Vec4<T> out;
  for (int k = 0; k < 4; ++k) {
    T acc(0.0);
    for (int i = 0; i < 4; ++i) acc += xj(i).v * yj(k).g(i) - yj(i).v * xj(k).g(i);
    out(k) = acc;
  }
  return out;
}

/// Jacobian ∂_j [X, Y]^i at p, obtained by nesting a dual number per direction.
template <typename FX, typename FY>
Eigen::Matrix4d lie_bracket_jacobian(const FX& X, const FY& Y, const Eigen::Vector4d& p) {
  Eigen::Matrix4d J;
  for (int dir = 0; dir < 4; ++dir) {
    const Vec4<Dual<double>> b = lie_bracket<Dual<double>>(X, Y, seed_direction(p, dir));
    for (int i = 0; i < 4; ++i) J(i, dir) = b(i).d;
  }
  return J;
}

}  // namespace orthotoric
