#include "fixtures.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace orthotoric;

TEST_CASE("orthotoric metric components at a reference point") {
  OrthotoricParams p;
  p.F.coeffs = {1.0};
  p.G.coeffs = {1.0};
  p.domain.x = {1.5, 3.0};
  p.domain.y = {0.0, 1.5};
  const MetricAtPoint m = orthotoric_metric(p, Point(2.0, 1.0, 0.0, 0.0));
  CHECK(m.g(0, 0) == doctest::Approx(1.0));
  CHECK(m.g(1, 1) == doctest::Approx(1.0));
  CHECK(m.g(2, 2) == doctest::Approx(2.0));
  CHECK(m.g(2, 3) == doctest::Approx(-3.0));
  CHECK(m.g(3, 2) == doctest::Approx(-3.0));
  CHECK(m.g(3, 3) == doctest::Approx(5.0));
  CHECK(m.g(0, 2) == 0.0);
}

TEST_CASE("metric jets agree with the independent one-form assembly and finite differences") {
  const auto params = fixtures::generic_params();
  const MetricFamily fam = OrthotoricFamily{params};
  const auto ref = [&](const Eigen::Vector4d& q) { return oracle::orthotoric_metric(params.F, params.G, q); };
  for (const Point& pt : fixtures::sample_points(params.domain, 5)) {
    const MetricAtPoint m = metric_at(fam, pt);
    const oracle::FdMetric fd = oracle::metric_derivatives(ref, pt.coords);
    CHECK((m.g - fd.g).norm() < 1e-13);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK((m.dg[k] - fd.dg[k]).norm() < 1e-8 * std::max(1.0, m.dg[k].norm()));
      for (std::size_t l = 0; l < 4; ++l) CHECK((m.ddg[k][l] - fd.ddg[k][l]).norm() < 1e-6);
    }
  }
}

TEST_CASE("distinguished frame is orthonormal with dual coframe") {
  for (const auto& params : {fixtures::generic_params(), fixtures::hk_params(0, 0.5, 2, 0),
                             fixtures::hk_params(1, 0, 4, 0)}) {
    for (const Point& pt : fixtures::sample_points(params.domain, 6)) {
      const Frame fr = orthotoric_frame(params, pt);
      const Eigen::Matrix4d E = fr.E_values();
      const Eigen::Matrix4d g = orthotoric_metric(params, pt).g;
      CHECK((E.transpose() * g * E - Eigen::Matrix4d::Identity()).norm() < 1e-13);
      CHECK((fr.theta_values() * E - Eigen::Matrix4d::Identity()).norm() < 1e-13);
      CHECK(orientation_sign(fr) == 1);
      CHECK(fr.phi.v > 0.0);
      CHECK(fr.phi.v < M_PI / 2);
      CHECK(fr.alpha.v == doctest::Approx(std::sqrt(params.F(pt.x()) + params.G(pt.y())) *
                                          std::pow(pt.x() - pt.y(), -1.5)));
      CHECK_FALSE(fr.degenerate);
    }
  }
}

TEST_CASE("frame jets carry correct derivatives") {
  const auto params = fixtures::generic_params();
  const Point pt(1.5, 0.6, 0.3, 0.2);
  const Frame fr = orthotoric_frame(params, pt);
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i) {
      const auto f = [&](const Eigen::Vector4d& q) {
        return values(orthotoric_frame(params, Point(q)).E[static_cast<std::size_t>(a)])(i);
      };
      CHECK((fr.E[static_cast<std::size_t>(a)](i).g - oracle::gradient(f, pt.coords)).norm() < 1e-8);
    }
  const auto phi = [&](const Eigen::Vector4d& q) { return orthotoric_frame(params, Point(q)).phi.v; };
  CHECK((fr.phi.g - oracle::gradient(phi, pt.coords)).norm() < 1e-8);
  CHECK((fr.phi.H - oracle::hessian(phi, pt.coords)).norm() < 1e-6);
}

TEST_CASE("domain validation") {
  auto params = fixtures::generic_params();
  CHECK_NOTHROW(params.validate());
  params.domain.y = {0.2, 1.5};
  CHECK_THROWS_AS(params.validate(), DomainError);

  auto neg = fixtures::generic_params();
  neg.G.coeffs = {0.5, -1.0};
  CHECK_THROWS_AS(neg.validate(), DomainError);

  auto empty = fixtures::generic_params();
  empty.domain.z = {1.0, 1.0};
  CHECK_THROWS_AS(empty.validate(), DomainError);

  CHECK_THROWS_AS(fixtures::hk_params(0, 0.5, 0.5, 0), DomainError);
  CHECK_THROWS_AS(orthotoric_frame(fixtures::generic_params(), Point(1.0, 0.5, 0.5, 0.5)), DomainError);
  CHECK_THROWS_AS(metric_at(fixtures::generic_family(), Point(1.5, 0.5, 2.0, 0.5)), DomainError);
}

TEST_CASE("hyperkähler profiles round trip through shape matching") {
  const auto params = fixtures::hk_params(1, 0.5, 4, 1);
  CHECK(params.F == Polynomial{{1.0, 1.0, 1.0}});
  CHECK(params.G == Polynomial{{4.0, -1.0, -1.0}});
  const auto hk = match_hyperkahler_shape(params.F, params.G);
  REQUIRE(hk.has_value());
  CHECK(hk->c == 1.0);
  CHECK(hk->a == 0.5);
  CHECK(hk->b1 == 4.0);
  CHECK(hk->b2 == 1.0);
  CHECK_FALSE(match_hyperkahler_shape(fixtures::generic_params().F, fixtures::generic_params().G).has_value());
  CHECK(Polynomial{{1.0, 2.0, 0.0}}.degree() == 1);
  CHECK(Polynomial{{1.0, 2.0, 3.0}}.derivative() == Polynomial{{2.0, 6.0}});
}

TEST_CASE("perturbed and flat frames") {
  const PerturbedFamily pert{OrthotoricFamily{fixtures::generic_params()}, 1e-2};
  const MetricFamily fam = pert;
  const Point pt(1.5, 0.6, 0.3, 0.2);
  const Frame fr = frame_at(fam, pt);
  const Eigen::Matrix4d E = fr.E_values();
  CHECK((E.transpose() * metric_at(fam, pt).g * E - Eigen::Matrix4d::Identity()).norm() < 1e-12);
  CHECK((fr.theta_values() * E - Eigen::Matrix4d::Identity()).norm() < 1e-12);
  CHECK_FALSE(fr.has_angle);

  const Frame flat = frame_at(MetricFamily{FlatFamily{}}, Point(0.5, 0.5, 0.5, 0.5));
  CHECK(flat.E_values() == Eigen::Matrix4d::Identity());
  CHECK(flat.alpha.v == 0.0);

  const Frame bad = corrupt_frame(orthotoric_frame(fixtures::generic_params(), pt), 1.1);
  const Eigen::Matrix4d Eb = bad.E_values();
  CHECK((Eb.transpose() * metric_at(fixtures::generic_family(), pt).g * Eb - Eigen::Matrix4d::Identity()).norm() >
        0.1);
}
