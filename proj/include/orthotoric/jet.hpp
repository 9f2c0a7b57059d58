#pragma once

// Forward-mode automatic differentiation on a four-dimensional chart.
//
// Jet<T> carries the value, gradient and Hessian of a scalar field with
// respect to the chart coordinates (x, y, z, t). Dual<T> is a first-order
// number along a single direction; nesting Jet<Dual<double>> yields third
// derivatives along that direction, which the curvature pipeline uses for
// derivatives of the Ricci tensor.

#include <Eigen/Core>

#include <cmath>
#include <numbers>

namespace orthotoric {
template <typename T>
struct Dual;
template <typename T>
struct Jet;
}  // namespace orthotoric

namespace Eigen {

template <typename T>
struct NumTraits<orthotoric::Dual<T>> : NumTraits<T> {
  using Real = orthotoric::Dual<T>;
  using NonInteger = orthotoric::Dual<T>;
  using Nested = orthotoric::Dual<T>;
  using Literal = orthotoric::Dual<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2 * NumTraits<T>::ReadCost,
    AddCost = 2 * NumTraits<T>::AddCost,
    MulCost = 3 * NumTraits<T>::MulCost,
  };
};

template <typename T>
struct NumTraits<orthotoric::Jet<T>> : NumTraits<T> {
  using Real = orthotoric::Jet<T>;
  using NonInteger = orthotoric::Jet<T>;
  using Nested = orthotoric::Jet<T>;
  using Literal = orthotoric::Jet<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 21 * NumTraits<T>::ReadCost,
    AddCost = 21 * NumTraits<T>::AddCost,
    MulCost = 60 * NumTraits<T>::MulCost,
  };
};

template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<orthotoric::Jet<T>, T, BinaryOp> {
  using ReturnType = orthotoric::Jet<T>;
};
template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<T, orthotoric::Jet<T>, BinaryOp> {
  using ReturnType = orthotoric::Jet<T>;
};

}  // namespace Eigen

namespace orthotoric {

template <typename S>
using Vec4 = Eigen::Matrix<S, 4, 1>;
template <typename S>
using Mat4 = Eigen::Matrix<S, 4, 4>;

// ---------------------------------------------------------------------------
// Dual<T>: a + b ε with ε² = 0.

template <typename T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(T value) : v(value), d(T(0)) {}  // NOLINT: implicit lift
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const T inv = T(1) / b.v;
    return {a.v * inv, (a.d * b.v - a.v * b.d) * inv * inv};
  }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator+(const Dual& a) { return a; }

  friend bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
  friend bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
  friend bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }
  friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v; }
  friend bool operator!=(const Dual& a, const Dual& b) { return a.v != b.v; }
};

template <typename T>
Dual<T> chain(const Dual<T>& u, T f0, T f1) {
  return {f0, f1 * u.d};
}

template <typename T>
Dual<T> sqrt(const Dual<T>& u) {
  using std::sqrt;
  const T s = sqrt(u.v);
  return chain(u, s, T(0.5) / s);
}
template <typename T>
Dual<T> log(const Dual<T>& u) {
  using std::log;
  return chain(u, log(u.v), T(1) / u.v);
}
template <typename T>
Dual<T> exp(const Dual<T>& u) {
  using std::exp;
  const T e = exp(u.v);
  return chain(u, e, e);
}
template <typename T>
Dual<T> sin(const Dual<T>& u) {
  using std::cos;
  using std::sin;
  return chain(u, sin(u.v), cos(u.v));
}
template <typename T>
Dual<T> cos(const Dual<T>& u) {
  using std::cos;
  using std::sin;
  return chain(u, cos(u.v), -sin(u.v));
}
template <typename T>
Dual<T> atan(const Dual<T>& u) {
  using std::atan;
  return chain(u, atan(u.v), T(1) / (T(1) + u.v * u.v));
}
template <typename T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  using std::atan2;
  const T r2 = x.v * x.v + y.v * y.v;
  return {atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / r2};
}
template <typename T>
Dual<T> pow(const Dual<T>& u, double p) {
  using std::pow;
  return chain(u, pow(u.v, T(p)), T(p) * pow(u.v, T(p - 1)));
}
template <typename T>
Dual<T> abs(const Dual<T>& u) {
  return u.v < T(0) ? -u : u;
}

template <typename T>
T value_of(const Dual<T>& u) {
  return u.v;
}
inline double value_of(double u) { return u; }

// ---------------------------------------------------------------------------
// Jet<T>: value, gradient and Hessian over the four chart coordinates.

template <typename T>
struct Jet {
  T v{};
  Vec4<T> g = Vec4<T>::Zero();
  Mat4<T> H = Mat4<T>::Zero();

  Jet() = default;
  Jet(T value) : v(value) {}  // NOLINT: implicit lift of constants
  Jet(double value)
    requires(!std::is_same_v<T, double>)
      : v(T(value)) {}
  Jet(T value, Vec4<T> grad, Mat4<T> hess)
      : v(value), g(std::move(grad)), H(std::move(hess)) {}

  /// The i-th coordinate function seeded at `at`.
  static Jet variable(int i, T at) {
    Jet j(at);
    j.g(i) = T(1);
    return j;
  }

  Jet& operator+=(const Jet& o) { v += o.v; g += o.g; H += o.H; return *this; }
  Jet& operator-=(const Jet& o) { v -= o.v; g -= o.g; H -= o.H; return *this; }
  Jet& operator*=(const Jet& o) {
    H = v * o.H + o.v * H + g * o.g.transpose() + o.g * g.transpose();
    g = v * o.g + o.v * g;
    v *= o.v;
    return *this;
  }
  Jet& operator/=(const Jet& o) { *this = *this / o; return *this; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator-(const Jet& a) { return {-a.v, -a.g, -a.H}; }
  friend Jet operator+(const Jet& a) { return a; }

  friend Jet reciprocal(const Jet& u) {
    const T inv = T(1) / u.v;
    return chain(u, inv, -inv * inv, T(2) * inv * inv * inv);
  }

  friend bool operator<(const Jet& a, const Jet& b) { return a.v < b.v; }
  friend bool operator>(const Jet& a, const Jet& b) { return a.v > b.v; }
  friend bool operator<=(const Jet& a, const Jet& b) { return a.v <= b.v; }
  friend bool operator>=(const Jet& a, const Jet& b) { return a.v >= b.v; }
  friend bool operator==(const Jet& a, const Jet& b) { return a.v == b.v; }
  friend bool operator!=(const Jet& a, const Jet& b) { return a.v != b.v; }
};

/// f(u) given f(u.v), f'(u.v), f''(u.v).
template <typename T>
Jet<T> chain(const Jet<T>& u, T f0, T f1, T f2) {
  return {f0, f1 * u.g, f1 * u.H + f2 * (u.g * u.g.transpose())};
}

template <typename T>
Jet<T> sqrt(const Jet<T>& u) {
  using std::sqrt;
  const T s = sqrt(u.v);
  return chain(u, s, T(0.5) / s, T(-0.25) / (s * u.v));
}
template <typename T>
Jet<T> log(const Jet<T>& u) {
  using std::log;
  const T inv = T(1) / u.v;
  return chain(u, log(u.v), inv, -inv * inv);
}
template <typename T>
Jet<T> exp(const Jet<T>& u) {
  using std::exp;
  const T e = exp(u.v);
  return chain(u, e, e, e);
}
template <typename T>
Jet<T> sin(const Jet<T>& u) {
  using std::cos;
  using std::sin;
  const T s = sin(u.v);
  return chain(u, s, cos(u.v), -s);
}
template <typename T>
Jet<T> cos(const Jet<T>& u) {
  using std::cos;
  using std::sin;
  const T c = cos(u.v);
  return chain(u, c, -sin(u.v), -c);
}
template <typename T>
Jet<T> atan(const Jet<T>& u) {
  using std::atan;
  const T q = T(1) / (T(1) + u.v * u.v);
  return chain(u, atan(u.v), q, T(-2) * u.v * q * q);
}
template <typename T>
Jet<T> pow(const Jet<T>& u, double p) {
  using std::pow;
  const T f0 = pow(u.v, T(p));
  const T f1 = T(p) * pow(u.v, T(p - 1));
  const T f2 = T(p * (p - 1)) * pow(u.v, T(p - 2));
  return chain(u, f0, f1, f2);
}
template <typename T>
Jet<T> abs(const Jet<T>& u) {
  return u.v < T(0) ? -u : u;
}

/// atan2 with derivatives taken from whichever of atan(y/x), π/2 − atan(x/y)
/// is well conditioned; both share derivatives with atan2 locally.
template <typename T>
Jet<T> atan2(const Jet<T>& y, const Jet<T>& x) {
  using std::abs;
  using std::atan2;
  Jet<T> r = abs(x.v) >= abs(y.v) ? atan(y / x) : -atan(x / y);
  r.v = atan2(y.v, x.v);
  return r;
}

template <typename T>
T value_of(const Jet<T>& u) {
  return u.v;
}

/// Seeds a point as four coordinate jets.
template <typename T>
Vec4<Jet<T>> seed(const Vec4<T>& p) {
  Vec4<Jet<T>> out;
  for (int i = 0; i < 4; ++i) out(i) = Jet<T>::variable(i, p(i));
  return out;
}

inline Vec4<Jet<double>> seed(const Eigen::Vector4d& p) { return seed<double>(Vec4<double>(p)); }

/// Point whose coordinates carry a unit derivative along `direction`.
inline Vec4<Dual<double>> seed_direction(const Eigen::Vector4d& p, int direction) {
  Vec4<Dual<double>> out;
  for (int i = 0; i < 4; ++i) out(i) = Dual<double>(p(i), i == direction ? 1.0 : 0.0);
  return out;
}

/// Values of a vector of jets.
template <typename T>
Vec4<T> values(const Vec4<Jet<T>>& v) {
  Vec4<T> out;
  for (int i = 0; i < 4; ++i) out(i) = v(i).v;
  return out;
}

/// Jacobian ∂_j v^i of a vector of jets.
template <typename T>
Mat4<T> jacobian(const Vec4<Jet<T>>& v) {
  Mat4<T> out;
  for (int i = 0; i < 4; ++i) out.row(i) = v(i).g.transpose();
  return out;
}

}  // namespace orthotoric
