#include "orthotoric/chart.hpp"

#include <cmath>

namespace orthotoric {

Point::Point(const Eigen::Vector4d& c) : coords(c) {
  if (!c.allFinite()) throw DomainError("point has non-finite coordinates");
}

Point::Point(double x, double y, double z, double t) : Point(Eigen::Vector4d(x, y, z, t)) {}

ThreeForm ThreeForm::on_basis(const Eigen::Matrix4d& E) const {
  ThreeForm out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int d = 0; d < 4; ++d) {
        double acc = 0.0;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) acc += (*this)(i, j, k) * E(i, a) * E(j, b) * E(k, d);
        out(a, b, d) = acc;
      }
  return out;
}

double ThreeForm::norm() const {
  double acc = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int d = b + 1; d < 4; ++d) acc += (*this)(a, b, d) * (*this)(a, b, d);
  return std::sqrt(acc);
}

ThreeForm& ThreeForm::operator-=(const ThreeForm& o) {
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
  return *this;
}

Eigen::Vector4d lie_bracket(const VecJ& X, const VecJ& Y) {
  return jacobian(Y) * values(X) - jacobian(X) * values(Y);
}

Eigen::Matrix4d exterior_derivative(const VecJ& w) {
  Eigen::Matrix4d d;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) d(a, b) = w(b).g(a) - w(a).g(b);
  return d;
}

ThreeForm exterior_derivative(const MatJ& w) {
  ThreeForm d;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) d(a, b, c) = w(b, c).g(a) + w(c, a).g(b) + w(a, b).g(c);
  return d;
}

MatJ wedge(const VecJ& u, const VecJ& v) {
  MatJ out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out(a, b) = u(a) * v(b) - u(b) * v(a);
  return out;
}

Eigen::Matrix4d wedge(const Eigen::Vector4d& u, const Eigen::Vector4d& v) {
  return u * v.transpose() - v * u.transpose();
}

ThreeForm wedge(const Eigen::Vector4d& eta, const Eigen::Matrix4d& w) {
  ThreeForm out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) out(a, b, c) = eta(a) * w(b, c) + eta(b) * w(c, a) + eta(c) * w(a, b);
  return out;
}

double wedge_top(const Eigen::Matrix4d& w, const Eigen::Matrix4d& s) {
  // (ω∧σ)_0123 = ω01 σ23 − ω02 σ13 + ω03 σ12 + ω12 σ03 − ω13 σ02 + ω23 σ01
  return w(0, 1) * s(2, 3) - w(0, 2) * s(1, 3) + w(0, 3) * s(1, 2) + w(1, 2) * s(0, 3) -
         w(1, 3) * s(0, 2) + w(2, 3) * s(0, 1);
}

Eigen::Matrix4d values(const MatJ& m) {
  Eigen::Matrix4d out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = m(i, j).v;
  return out;
}

Eigen::Vector4d sharp(const Eigen::Vector4d& omega, const Eigen::Matrix4d& g) {
  const Eigen::LLT<Eigen::Matrix4d> llt(g);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::kSingularMetric, "metric not positive definite");
  return llt.solve(omega);
}

Eigen::Vector4d flat(const Eigen::Vector4d& X, const Eigen::Matrix4d& g) { return g * X; }

Eigen::Matrix4d on_basis(const Eigen::Matrix4d& w, const Eigen::Matrix4d& E) { return E.transpose() * w * E; }

double two_form_norm(const Eigen::Matrix4d& w) {
  double acc = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) acc += w(a, b) * w(a, b);
  return std::sqrt(acc);
}

}  // namespace orthotoric
