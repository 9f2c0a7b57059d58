#pragma once

// Levi-Civita curvature at a point, templated on the scalar so that the same
// code runs on doubles and on dual numbers (for derivatives of curvature).
//
// Conventions:
//   Γ^k_ij = ½ g^kl (∂_i g_jl + ∂_j g_il − ∂_l g_ij)
//   R(∂_i, ∂_j)∂_k = R^l_ijk ∂_l,
//   R^l_ijk = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik
//   R_ijkl = g(R(∂_i, ∂_j)∂_k, ∂_l), so R(X, Y, Y, X) is the sectional curvature
//   Ric_jk = R^i_ijk, s = g^jk Ric_jk

#include "orthotoric/metric_zoo.hpp"

#include <Eigen/Dense>

#include <array>

namespace orthotoric {

/// Fully covariant 4-index tensor, row-major over (i, j, k, l).
template <typename T>
struct Tensor4 {
  std::array<T, 256> c{};

  T& operator()(int i, int j, int k, int l) { return c[static_cast<std::size_t>(64 * i + 16 * j + 4 * k + l)]; }
  const T& operator()(int i, int j, int k, int l) const {
    return c[static_cast<std::size_t>(64 * i + 16 * j + 4 * k + l)];
  }
};

/// Γ[k](i, j) = Γ^k_ij.
template <typename T>
using Christoffel = std::array<Mat4<T>, 4>;

template <typename T>
Mat4<T> inverse_metric(const Mat4<T>& g) {
  return g.inverse();
}

template <typename T>
struct Connection {
  Mat4<T> g_inv;
  Christoffel<T> gamma;
  /// dgamma[m][k](i, j) = ∂_m Γ^k_ij
  std::array<Christoffel<T>, 4> dgamma;
};

template <typename T>
Connection<T> connection(const MetricJet<T>& m) {
  using std::abs;
  if (!(abs(value_of(m.g.determinant())) > 1e-300)) throw Error(ErrorCode::kSingularMetric, "singular metric");
  Connection<T> c;
  c.g_inv = inverse_metric<T>(m.g);
  // Christoffel symbols of the first kind and their derivatives.
  std::array<Mat4<T>, 4> first;  // first[l](i, j) = Γ_lij
  std::array<std::array<Mat4<T>, 4>, 4> dfirst;  // dfirst[m][l](i, j)
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        first[l](i, j) = T(0.5) * (m.dg[i](j, l) + m.dg[j](i, l) - m.dg[l](i, j));
        for (int n = 0; n < 4; ++n)
          dfirst[n][l](i, j) = T(0.5) * (m.ddg[n][i](j, l) + m.ddg[n][j](i, l) - m.ddg[n][l](i, j));
      }
  std::array<Mat4<T>, 4> dginv;  // ∂_n g^kl = −g^ka ∂_n g_ab g^bl
  for (int n = 0; n < 4; ++n) dginv[n] = -(c.g_inv * m.dg[n] * c.g_inv);
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        T acc(0.0);
        for (int l = 0; l < 4; ++l) acc += c.g_inv(k, l) * first[l](i, j);
        c.gamma[k](i, j) = acc;
        for (int n = 0; n < 4; ++n) {
          T dacc(0.0);
          for (int l = 0; l < 4; ++l) dacc += dginv[n](k, l) * first[l](i, j) + c.g_inv(k, l) * dfirst[n][l](i, j);
          c.dgamma[n][k](i, j) = dacc;
        }
      }
  return c;
}

template <typename T>
Christoffel<T> christoffel(const MetricJet<T>& m) {
  return connection(m).gamma;
}

template <typename T>
struct Curvature {
  Connection<T> conn;
  Mat4<T> g;
  Tensor4<T> riemann;  // R_ijkl
  Mat4<T> ricci;
  T scalar{};
};

template <typename T>
Curvature<T> curvature(const MetricJet<T>& m) {
  Curvature<T> out;
  out.g = m.g;
  out.conn = connection(m);
  const auto& G = out.conn.gamma;
  const auto& dG = out.conn.dgamma;
  // R^l_ijk stored temporarily as up(l, i, j, k).
  Tensor4<T> up;
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          T acc = dG[i][l](j, k) - dG[j][l](i, k);
          for (int n = 0; n < 4; ++n) acc += G[l](i, n) * G[n](j, k) - G[l](j, n) * G[n](i, k);
          up(l, i, j, k) = acc;
        }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          T acc(0.0);
          for (int n = 0; n < 4; ++n) acc += m.g(l, n) * up(n, i, j, k);
          out.riemann(i, j, k, l) = acc;
        }
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      T acc(0.0);
      for (int i = 0; i < 4; ++i) acc += up(i, i, j, k);
      out.ricci(j, k) = acc;
    }
  T s(0.0);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) s += out.conn.g_inv(j, k) * out.ricci(j, k);
  out.scalar = s;
  return out;
}

using CurvatureD = Curvature<double>;

/// Curvature of a family at a point with the domain enforced.
CurvatureD curvature_at(const MetricFamily& family, const Point& p);

/// ∂_m Ric_jk at p via a dual number nested under the metric jets.
std::array<Eigen::Matrix4d, 4> ricci_derivatives(const MetricFamily& family, const Point& p);

/// Weyl tensor W_ijkl = R_ijkl − ½(g_il R_jk + g_jk R_il − g_ik R_jl − g_jl R_ik)
///                     + (s/6)(g_il g_jk − g_ik g_jl).
Tensor4<double> weyl_tensor(const CurvatureD& c);

/// Components on a basis: T(E_a, E_b, E_c, E_d).
Tensor4<double> on_basis(const Tensor4<double>& t, const Eigen::Matrix4d& basis_columns);

// ---------------------------------------------------------------------------
// Two-forms, Hodge star and the curvature operator.

/// Six unit 2-forms on an orthonormal frame, split by duality. Components are
/// on the frame (index a ↔ E_{a+1}).
struct TwoFormBasis {
  std::array<Eigen::Matrix4d, 3> self_dual;
  std::array<Eigen::Matrix4d, 3> anti_self_dual;
};

/// The basis attached to the distinguished frame, oriented so that
/// (E₁, E₃, E₂, E₄) is positive:
///   Λ⁺: (θ₁₃ + θ₂₄, θ₁₂ − θ₃₄, θ₂₃ − θ₁₄)/√2
///   Λ⁻: (−θ₁₃ + θ₂₄, θ₁₂ + θ₃₄, θ₁₄ + θ₂₃)/√2
/// so the first entries are ω_J/√2 and ω_I/√2.
TwoFormBasis frame_two_form_basis();

/// Hodge star of a 2-form given by frame components on an orthonormal frame
/// whose orientation is `orientation` relative to (E₁, E₂, E₃, E₄).
Eigen::Matrix4d hodge_star(const Eigen::Matrix4d& frame_two_form, int orientation);

/// Hodge star of a coordinate 2-form for metric g and the orientation with
/// vol = orientation · √det g dx∧dy∧dz∧dt.
Eigen::Matrix4d hodge_star_coordinates(const Eigen::Matrix4d& two_form, const Eigen::Matrix4d& g,
                                       int orientation);

/// ⟨σ, τ⟩ = ½ σ_ab τ_ab on an orthonormal frame.
double form_inner(const Eigen::Matrix4d& sigma, const Eigen::Matrix4d& tau);

/// 6×6 matrix ⟨R(σ_A), σ_B⟩ over the basis (Λ⁺ first), from frame components
/// of a curvature-type tensor; R(e₁∧e₂) paired with e₁∧e₂ gives K(e₁, e₂).
Eigen::Matrix<double, 6, 6> curvature_operator(const Tensor4<double>& frame_tensor, const TwoFormBasis& basis);

struct WeylSplit {
  Eigen::Matrix3d weyl_plus;
  Eigen::Matrix3d weyl_minus;
  Eigen::Vector3d plus_spectrum;   // ascending
  Eigen::Vector3d minus_spectrum;  // ascending
};

/// W± on the frame's self-dual/anti-self-dual bases. `frame_columns` holds
/// E₁..E₄; the orientation is the one fixed by frame_two_form_basis().
WeylSplit weyl_split(const CurvatureD& c, const Eigen::Matrix4d& frame_columns);

/// Eigenvalues of a symmetric 3×3 matrix, ascending. Closed form, falling back
/// to symmetric QR when the discriminant is below 1e−12.
Eigen::Vector3d symmetric_eigenvalues3(const Eigen::Matrix3d& A);

/// ‖W⁻ω − λω‖ for a unit anti-self-dual ω with λ its Rayleigh quotient;
/// throws if ω (frame components) is not anti-self-dual within 1e−8.
double eigenform_check(const Eigen::Matrix3d& weyl_minus, const Eigen::Matrix4d& frame_two_form);

// ---------------------------------------------------------------------------
// Covariant derivatives of fields given as jets at the point.

/// ∇_X V with (∇_X V)^m = X^n (∂_n V^m + Γ^m_nl V^l).
Eigen::Vector4d covariant_derivative(const Christoffel<double>& gamma, const VecJ& field, const Eigen::Vector4d& X);

/// (∇_k ω)_ij = ∂_k ω_ij − Γ^m_ki ω_mj − Γ^m_kj ω_im, indexed [k](i, j).
std::array<Eigen::Matrix4d, 4> covariant_derivative(const Christoffel<double>& gamma, const MatJ& two_form);

/// (∇ω)(E_a; E_b, E_c) for the columns of `basis_columns`, indexed [a](b, c).
std::array<Eigen::Matrix4d, 4> on_basis(const std::array<Eigen::Matrix4d, 4>& nabla,
                                        const Eigen::Matrix4d& basis_columns);

/// Frobenius norm over all components.
double frobenius(const std::array<Eigen::Matrix4d, 4>& t);

// ---------------------------------------------------------------------------
// Identity residuals.

/// max |R_ijkl + R_jikl|, |R_ijkl + R_ijlk|, |R_ijkl − R_klij|.
double riemann_symmetry_residual(const Tensor4<double>& r);
/// max |R_ijkl + R_jkil + R_kijl| (cyclic in the first three slots).
double first_bianchi_residual(const Tensor4<double>& r);
/// max_ijk |∇_k g_ij| with the computed connection.
double metric_compatibility_residual(const MetricAtPoint& m, const Christoffel<double>& gamma);
/// |div Ric − ½ ds| using ricci_derivatives.
double contracted_bianchi_residual(const MetricFamily& family, const Point& p);

}  // namespace orthotoric
