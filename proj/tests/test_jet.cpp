#include "oracle.hpp"

#include "orthotoric/chart.hpp"

#include <doctest.h>

#include <cmath>

using namespace orthotoric;

namespace {

template <typename S>
S composite(const Vec4<S>& p) {
  using std::atan2;
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  return sqrt(p(0) * p(0) + p(1)) * sin(p(2) - p(3)) + log(p(0) + 2.0 * p(3)) / (1.0 + p(1) * p(1)) +
         exp(-p(2) * p(0)) * cos(p(1)) + atan2(p(1), p(0)) * pow(p(0), 1.5);
}

}  // namespace

TEST_CASE("jet gradient and Hessian agree with finite differences") {
  for (const Eigen::Vector4d p : {Eigen::Vector4d(1.3, 0.4, 0.2, 0.7), Eigen::Vector4d(0.6, 1.7, -0.3, 0.1)}) {
    const Jetd j = composite<Jetd>(seed(p));
    const auto f = [](const Eigen::Vector4d& q) { return composite<double>(Vec4<double>(q)); };
    CHECK(j.v == doctest::Approx(f(p)).epsilon(1e-14));
    CHECK((j.g - oracle::gradient(f, p)).norm() < 1e-8);
    CHECK((j.H - oracle::hessian(f, p)).norm() < 1e-7);
    CHECK((j.H - j.H.transpose()).norm() == 0.0);
  }
}

TEST_CASE("atan2 jets are consistent on both branches") {
  for (const auto& [yv, xv] : {std::pair{0.3, 1.2}, std::pair{1.9, 0.2}, std::pair{0.7, -0.4}}) {
    const Eigen::Vector4d p(xv, yv, 0.0, 0.0);
    const Jetd j = atan2(seed(p)(1), seed(p)(0));
    const auto f = [](const Eigen::Vector4d& q) { return std::atan2(q(1), q(0)); };
    CHECK(j.v == doctest::Approx(f(p)).epsilon(1e-15));
    CHECK((j.g - oracle::gradient(f, p)).norm() < 1e-9);
    CHECK((j.H - oracle::hessian(f, p)).norm() < 1e-7);
  }
}

TEST_CASE("nested dual numbers give third derivatives") {
  // f = x³ y² z; ∂_x ∂_x ∂_y f = 12 x y z.
  const Eigen::Vector4d p(1.1, 0.6, 1.7, 0.0);
  const auto run = [&](int dir) {
    const auto q = seed<Dual<double>>(seed_direction(p, dir));
    const auto f = q(0) * q(0) * q(0) * q(1) * q(1) * q(2);
    return f.H;
  };
  const auto hx = run(0);
  CHECK(hx(0, 1).d == doctest::Approx(6.0 * 2.0 * 1.1 * 0.6 * 1.7));
  const auto hz = run(2);
  CHECK(hz(0, 0).d == doctest::Approx(6.0 * 1.1 * 0.6 * 0.6));
  CHECK(hz(0, 0).v == doctest::Approx(6.0 * 1.1 * 0.6 * 0.6 * 1.7));
}

TEST_CASE("dual arithmetic") {
  const Dual<double> a(2.0, 1.0);
  const Dual<double> b(3.0, -1.0);
  CHECK((a * b).d == doctest::Approx(1.0));
  CHECK((a / b).d == doctest::Approx((1.0 * 3.0 + 2.0) / 9.0));
  CHECK(sqrt(a).d == doctest::Approx(0.5 / std::sqrt(2.0)));
  CHECK(atan2(b, a).d == doctest::Approx((2.0 * -1.0 - 3.0 * 1.0) / 13.0));
}
