#include "orthotoric/curvature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace orthotoric {

CurvatureD curvature_at(const MetricFamily& family, const Point& p) {
  return curvature(metric_at(family, p));
}

namespace {

struct DirectionalCurvature {
  std::array<Eigen::Matrix4d, 4> d_ricci;
  Eigen::Vector4d d_scalar;
};

DirectionalCurvature directional_curvature(const MetricFamily& family, const Point& p) {
  if (!admits(family, p.coords)) throw DomainError("point outside the family's domain");
  DirectionalCurvature out;
  for (int dir = 0; dir < 4; ++dir) {
    const auto m = metric_jet<Dual<double>>(family, seed_direction(p.coords, dir));
    const auto c = curvature(m);
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) out.d_ricci[static_cast<std::size_t>(dir)](j, k) = c.ricci(j, k).d;
    out.d_scalar(dir) = c.scalar.d;
  }
  return out;
}

int levi_civita(int a, int b, int c, int d) {
  const std::array<int, 4> p{a, b, c, d};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[static_cast<std::size_t>(i)] == p[static_cast<std::size_t>(j)]) return 0;
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)]) sign = -sign;
  return sign;
}

// Relative to (E₁, E₂, E₃, E₄), the frame orientation (E₁, E₃, E₂, E₄) is odd.
constexpr int kFrameOrientation = -1;

Eigen::Matrix4d unit_form(int a, int b) {
  Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
  w(a, b) = 1.0;
  w(b, a) = -1.0;
  return w;
}

}  // namespace

std::array<Eigen::Matrix4d, 4> ricci_derivatives(const MetricFamily& family, const Point& p) {
  return directional_curvature(family, p).d_ricci;
}

Tensor4<double> weyl_tensor(const CurvatureD& c) {
  const auto& g = c.g;
  const auto& Ric = c.ricci;
  const double s = c.scalar;
  Tensor4<double> W;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          W(i, j, k, l) = c.riemann(i, j, k, l) -
                          0.5 * (g(i, l) * Ric(j, k) + g(j, k) * Ric(i, l) - g(i, k) * Ric(j, l) - g(j, l) * Ric(i, k)) +
                          (s / 6.0) * (g(i, l) * g(j, k) - g(i, k) * g(j, l));
  return W;
}

Tensor4<double> on_basis(const Tensor4<double>& t, const Eigen::Matrix4d& E) {
  // Contract one slot at a time.
  Tensor4<double> a = t;
  for (int slot = 0; slot < 4; ++slot) {
    Tensor4<double> b;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double acc = 0.0;
            for (int m = 0; m < 4; ++m) {
              switch (slot) {
                case 0: acc += a(m, j, k, l) * E(m, i); break;
                case 1: acc += a(i, m, k, l) * E(m, j); break;
                case 2: acc += a(i, j, m, l) * E(m, k); break;
                default: acc += a(i, j, k, m) * E(m, l); break;
              }
            }
            b(i, j, k, l) = acc;
          }
    a = b;
  }
  return a;
}

TwoFormBasis frame_two_form_basis() {
  const double r = 1.0 / std::numbers::sqrt2;
  const auto e = [](int a, int b) { return unit_form(a - 1, b - 1); };
  TwoFormBasis out;
  out.self_dual = {r * (e(1, 3) + e(2, 4)), r * (e(1, 2) - e(3, 4)), r * (e(2, 3) - e(1, 4))};
  out.anti_self_dual = {r * (-e(1, 3) + e(2, 4)), r * (e(1, 2) + e(3, 4)), r * (e(1, 4) + e(2, 3))};
  return out;
}

Eigen::Matrix4d hodge_star(const Eigen::Matrix4d& w, int orientation) {
  Eigen::Matrix4d out = Eigen::Matrix4d::Zero();
  for (int c = 0; c < 4; ++c)
    for (int d = 0; d < 4; ++d) {
      double acc = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) acc += w(a, b) * levi_civita(a, b, c, d);
      out(c, d) = 0.5 * orientation * acc;
    }
  return out;
}

Eigen::Matrix4d hodge_star_coordinates(const Eigen::Matrix4d& w, const Eigen::Matrix4d& g, int orientation) {
  const double det = g.determinant();
  if (!(det > 0.0)) throw Error(ErrorCode::kSingularMetric, "metric determinant is not positive");
  const Eigen::Matrix4d gi = g.inverse();
  const Eigen::Matrix4d up = gi * w * gi.transpose();
  return std::sqrt(det) * hodge_star(up, orientation);
}

double form_inner(const Eigen::Matrix4d& sigma, const Eigen::Matrix4d& tau) {
  return 0.5 * sigma.cwiseProduct(tau).sum();
}

Eigen::Matrix<double, 6, 6> curvature_operator(const Tensor4<double>& R, const TwoFormBasis& basis) {
  std::array<Eigen::Matrix4d, 6> forms;
  for (std::size_t i = 0; i < 3; ++i) {
    forms[i] = basis.self_dual[i];
    forms[i + 3] = basis.anti_self_dual[i];
  }
  Eigen::Matrix<double, 6, 6> out;
  for (std::size_t A = 0; A < 6; ++A)
    for (std::size_t B = 0; B < 6; ++B) {
      double acc = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          if (forms[A](i, j) == 0.0) continue;
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) acc += forms[A](i, j) * R(i, j, l, k) * forms[B](k, l);
        }
      out(static_cast<Eigen::Index>(A), static_cast<Eigen::Index>(B)) = 0.25 * acc;
    }
  return out;
}

WeylSplit weyl_split(const CurvatureD& c, const Eigen::Matrix4d& frame_columns) {
  const Tensor4<double> W = on_basis(weyl_tensor(c), frame_columns);
  const Eigen::Matrix<double, 6, 6> op = curvature_operator(W, frame_two_form_basis());
  WeylSplit out;
  out.weyl_plus = op.topLeftCorner<3, 3>();
  out.weyl_minus = op.bottomRightCorner<3, 3>();
  out.plus_spectrum = symmetric_eigenvalues3(out.weyl_plus);
  out.minus_spectrum = symmetric_eigenvalues3(out.weyl_minus);
  return out;
}

Eigen::Vector3d symmetric_eigenvalues3(const Eigen::Matrix3d& M) {
  const Eigen::Matrix3d A = 0.5 * (M + M.transpose());
  const double p1 = A(0, 1) * A(0, 1) + A(0, 2) * A(0, 2) + A(1, 2) * A(1, 2);
  const double q = A.trace() / 3.0;
  const double p2 = (A(0, 0) - q) * (A(0, 0) - q) + (A(1, 1) - q) * (A(1, 1) - q) + (A(2, 2) - q) * (A(2, 2) - q) +
                    2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if (p <= 1e-15 * scale) return Eigen::Vector3d::Constant(q);
  const Eigen::Matrix3d B = (A - q * Eigen::Matrix3d::Identity()) / p;
  const double r = B.determinant() / 2.0;
  if (1.0 - r * r < 1e-12) {
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(A, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }
  const double angle = std::acos(std::clamp(r, -1.0, 1.0)) / 3.0;
  const double largest = q + 2.0 * p * std::cos(angle);
  const double smallest = q + 2.0 * p * std::cos(angle + 2.0 * std::numbers::pi / 3.0);
  return {smallest, 3.0 * q - largest - smallest, largest};
}

double eigenform_check(const Eigen::Matrix3d& weyl_minus, const Eigen::Matrix4d& form) {
  const Eigen::Matrix4d star = hodge_star(form, kFrameOrientation);
  const double size = std::max(two_form_norm(form), 1e-300);
  if (two_form_norm(star + form) > 1e-8 * size) throw Error(ErrorCode::kInvalidArgument, "form is not anti-self-dual");
  const TwoFormBasis basis = frame_two_form_basis();
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) v(i) = form_inner(form, basis.anti_self_dual[static_cast<std::size_t>(i)]);
  if (v.norm() == 0.0) throw Error(ErrorCode::kInvalidArgument, "zero form");
  v.normalize();
  const Eigen::Matrix3d Ws = 0.5 * (weyl_minus + weyl_minus.transpose());
  const double lambda = v.dot(Ws * v);
  return (Ws * v - lambda * v).norm();
}

Eigen::Vector4d covariant_derivative(const Christoffel<double>& gamma, const VecJ& field, const Eigen::Vector4d& X) {
  const Eigen::Vector4d V = values(field);
  Eigen::Vector4d out = jacobian(field) * X;
  for (int m = 0; m < 4; ++m) out(m) += X.dot(gamma[static_cast<std::size_t>(m)] * V);
  return out;
}

std::array<Eigen::Matrix4d, 4> covariant_derivative(const Christoffel<double>& gamma, const MatJ& w) {
  const Eigen::Matrix4d v = values(w);
  std::array<Eigen::Matrix4d, 4> out;
  for (int k = 0; k < 4; ++k) {
    Eigen::Matrix4d& n = out[static_cast<std::size_t>(k)];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double acc = w(i, j).g(k);
        for (int m = 0; m < 4; ++m)
          acc -= gamma[static_cast<std::size_t>(m)](k, i) * v(m, j) + gamma[static_cast<std::size_t>(m)](k, j) * v(i, m);
        n(i, j) = acc;
      }
  }
  return out;
}

std::array<Eigen::Matrix4d, 4> on_basis(const std::array<Eigen::Matrix4d, 4>& nabla, const Eigen::Matrix4d& E) {
  std::array<Eigen::Matrix4d, 4> out;
  for (int a = 0; a < 4; ++a) {
    Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
    for (int k = 0; k < 4; ++k) acc += E(k, a) * nabla[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(a)] = E.transpose() * acc * E;
  }
  return out;
}

double frobenius(const std::array<Eigen::Matrix4d, 4>& t) {
  double acc = 0.0;
  for (const auto& m : t) acc += m.squaredNorm();
  return std::sqrt(acc);
}

double riemann_symmetry_residual(const Tensor4<double>& r) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          worst = std::max(worst, std::abs(r(i, j, k, l) + r(j, i, k, l)));
          worst = std::max(worst, std::abs(r(i, j, k, l) + r(i, j, l, k)));
          worst = std::max(worst, std::abs(r(i, j, k, l) - r(k, l, i, j)));
        }
  return worst;
}

double first_bianchi_residual(const Tensor4<double>& r) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          worst = std::max(worst, std::abs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
  return worst;
}

double metric_compatibility_residual(const MetricAtPoint& m, const Christoffel<double>& gamma) {
  double worst = 0.0;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double v = m.dg[static_cast<std::size_t>(k)](i, j);
        for (int n = 0; n < 4; ++n)
          v -= gamma[static_cast<std::size_t>(n)](k, i) * m.g(n, j) + gamma[static_cast<std::size_t>(n)](k, j) * m.g(i, n);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

double contracted_bianchi_residual(const MetricFamily& family, const Point& p) {
  const CurvatureD c = curvature_at(family, p);
  const DirectionalCurvature d = directional_curvature(family, p);
  const auto& G = c.conn.gamma;
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) {
    double div = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double nabla = d.d_ricci[static_cast<std::size_t>(i)](j, k);
        for (int n = 0; n < 4; ++n)
          nabla -= G[static_cast<std::size_t>(n)](i, j) * c.ricci(n, k) + G[static_cast<std::size_t>(n)](i, k) * c.ricci(j, n);
        div += c.conn.g_inv(i, j) * nabla;
      }
    worst = std::max(worst, std::abs(div - 0.5 * d.d_scalar(k)));
  }
  return worst;
}

}  // namespace orthotoric
