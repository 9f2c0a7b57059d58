#pragma once

// Finite-difference oracles. These never share code with the jet pipeline and
// exist only to cross-check it.

#include "orthotoric/metric_zoo.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>

namespace oracle {

using ScalarFn = std::function<double(const Eigen::Vector4d&)>;
using MetricFn = std::function<Eigen::Matrix4d(const Eigen::Vector4d&)>;

inline Eigen::Vector4d unit(int i) {
  Eigen::Vector4d e = Eigen::Vector4d::Zero();
  e(i) = 1.0;
  return e;
}

/// Central differences, second order.
inline Eigen::Vector4d gradient(const ScalarFn& f, const Eigen::Vector4d& p, double h = 1e-5) {
  Eigen::Vector4d out;
  for (int i = 0; i < 4; ++i) out(i) = (f(p + h * unit(i)) - f(p - h * unit(i))) / (2.0 * h);
  return out;
}

/// Five-point derivative of a generic value type along axis i.
template <typename V, typename Fn>
V diff4(const Fn& f, const Eigen::Vector4d& p, int i, double h) {
  const Eigen::Vector4d e = h * unit(i);
  return (-f(p + 2.0 * e) + 8.0 * f(p + e) - 8.0 * f(p - e) + f(p - 2.0 * e)) / (12.0 * h);
}

/// Fourth-order Hessian: the five-point stencil composed with itself.
inline Eigen::Matrix4d hessian(const ScalarFn& f, const Eigen::Vector4d& p, double h = 1e-3) {
  Eigen::Matrix4d out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const auto dj = [&](const Eigen::Vector4d& q) { return diff4<double>(f, q, j, h); };
      out(i, j) = diff4<double>(dj, p, i, h);
    }
  return out;
}

/// The orthotoric metric assembled as a sum of squares of coordinate one-forms,
/// coded independently of the family classes.
inline Eigen::Matrix4d orthotoric_metric(const orthotoric::Polynomial& F, const orthotoric::Polynomial& G,
                                         const Eigen::Vector4d& p) {
  const double x = p(0), y = p(1);
  const double f = F(x), gg = G(y), r = x - y;
  const Eigen::Vector4d dx = unit(0), dy = unit(1);
  const Eigen::Vector4d u = unit(2) - y * unit(3);
  const Eigen::Vector4d v = unit(2) - x * unit(3);
  return r / f * dx * dx.transpose() + r / gg * dy * dy.transpose() + f / r * u * u.transpose() +
         gg / r * v * v.transpose();
}

struct FdMetric {
  Eigen::Matrix4d g;
  std::array<Eigen::Matrix4d, 4> dg;
  std::array<std::array<Eigen::Matrix4d, 4>, 4> ddg;
};

inline FdMetric metric_derivatives(const MetricFn& metric, const Eigen::Vector4d& p, double h = 1e-3) {
  FdMetric m;
  m.g = metric(p);
  for (int i = 0; i < 4; ++i) {
    m.dg[static_cast<std::size_t>(i)] = diff4<Eigen::Matrix4d>(metric, p, i, h);
    for (int j = 0; j < 4; ++j) {
      const auto dj = [&](const Eigen::Vector4d& q) { return Eigen::Matrix4d(diff4<Eigen::Matrix4d>(metric, q, j, h)); };
      m.ddg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = diff4<Eigen::Matrix4d>(dj, p, i, h);
    }
  }
  return m;
}

/// R_ijkl = g(R(∂_i, ∂_j)∂_k, ∂_l) from the closed coordinate formula
///   ½(g_lj,ki + g_ki,lj − g_li,kj − g_kj,li) + g_ef(Γ^e_ki Γ^f_lj − Γ^e_kj Γ^f_li).
inline std::array<double, 256> riemann(const FdMetric& m) {
  const Eigen::Matrix4d gi = m.g.inverse();
  std::array<Eigen::Matrix4d, 4> gamma;
  for (int e = 0; e < 4; ++e)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double acc = 0.0;
        for (int l = 0; l < 4; ++l)
          acc += 0.5 * gi(e, l) *
                 (m.dg[static_cast<std::size_t>(a)](b, l) + m.dg[static_cast<std::size_t>(b)](a, l) -
                  m.dg[static_cast<std::size_t>(l)](a, b));
        gamma[static_cast<std::size_t>(e)](a, b) = acc;
      }
  const auto dd = [&](int a, int b, int i, int j) {
    return m.ddg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](a, b);
  };
  std::array<double, 256> R{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double v = 0.5 * (dd(l, j, k, i) + dd(k, i, l, j) - dd(l, i, k, j) - dd(k, j, l, i));
          for (int e = 0; e < 4; ++e)
            for (int f = 0; f < 4; ++f)
              v += m.g(e, f) * (gamma[static_cast<std::size_t>(e)](k, i) * gamma[static_cast<std::size_t>(f)](l, j) -
                                gamma[static_cast<std::size_t>(e)](k, j) * gamma[static_cast<std::size_t>(f)](l, i));
          R[static_cast<std::size_t>(64 * i + 16 * j + 4 * k + l)] = v;
        }
  return R;
}

}  // namespace oracle
