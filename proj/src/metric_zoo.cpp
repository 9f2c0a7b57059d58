#include "orthotoric/metric_zoo.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace orthotoric {

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t k = 1; k < coeffs.size(); ++k) d.coeffs.push_back(static_cast<double>(k) * coeffs[k]);
  return d;
}

int Polynomial::degree() const {
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
    if (coeffs[static_cast<std::size_t>(k)] != 0.0) return k;
  return -1;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  const std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
  for (std::size_t k = 0; k < n; ++k)
    if (a.coefficient(k) != b.coefficient(k)) return false;
  return true;
}

std::array<double, 2> Rectangle::axis(int i) const {
  switch (i) {
    case 0: return x;
    case 1: return y;
    case 2: return z;
    default: return t;
  }
}

bool Rectangle::contains(const Eigen::Vector4d& p) const {
  for (int i = 0; i < 4; ++i) {
    const auto [lo, hi] = axis(i);
    if (!(p(i) >= lo && p(i) <= hi)) return false;
  }
  return true;
}

void OrthotoricParams::validate() const {
  for (int i = 0; i < 4; ++i) {
    const auto [lo, hi] = domain.axis(i);
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
      std::ostringstream os;
      os << "domain axis " << i << " is empty or non-finite: [" << lo << ", " << hi << "]";
      throw DomainError(os.str());
    }
  }
  if (F.coeffs.empty() || G.coeffs.empty()) throw DomainError("profile polynomial has no coefficients");
  constexpr int kSub = 32;
  for (int i = 0; i < kSub; ++i) {
    const double sx = domain.x[0] + (domain.x[1] - domain.x[0]) * i / (kSub - 1);
    for (int j = 0; j < kSub; ++j) {
      const double sy = domain.y[0] + (domain.y[1] - domain.y[0]) * j / (kSub - 1);
      if (!(F(sx) > 0.0)) throw DomainError("F is not positive on the declared domain");
      if (!(G(sy) > 0.0)) throw DomainError("G is not positive on the declared domain");
      // The corner x_lo = y_hi is the boundary x = y, allowed as a limit only.
      if (sx < sy) throw DomainError("domain rectangle crosses the diagonal x = y");
    }
  }
}

bool OrthotoricParams::admits(const Eigen::Vector4d& p) const {
  return domain.contains(p) && p(0) > p(1) && F(p(0)) > 0.0 && G(p(1)) > 0.0;
}

OrthotoricParams hyperkahler_profiles(const HyperkahlerParams& hk, const Rectangle& domain) {
  OrthotoricParams out;
  out.F.coeffs = {hk.b2, 2.0 * hk.a, hk.c};
  out.G.coeffs = {hk.b1, -2.0 * hk.a, -hk.c};
  out.domain = domain;
  out.validate();
  return out;
}

std::optional<HyperkahlerParams> match_hyperkahler_shape(const Polynomial& F, const Polynomial& G, double tol) {
  if (F.degree() > 2 || G.degree() > 2) return std::nullopt;
  const double c = F.coefficient(2);
  const double a = 0.5 * F.coefficient(1);
  const auto close = [tol](double u, double v) { return std::abs(u - v) <= tol * std::max(1.0, std::abs(u)); };
  if (!close(G.coefficient(2), -c) || !close(G.coefficient(1), -2.0 * a)) return std::nullopt;
  return HyperkahlerParams{c, a, G.coefficient(0), F.coefficient(0)};
}

bool admits(const MetricFamily& family, const Eigen::Vector4d& p) {
  return std::visit([&](const auto& f) { return f.admits(p); }, family);
}

const Rectangle& domain_of(const MetricFamily& family) {
  return std::visit([](const auto& f) -> const Rectangle& { return f.domain(); }, family);
}

MetricAtPoint metric_at(const MetricFamily& family, const Point& p) {
  if (!admits(family, p.coords)) throw DomainError("point outside the family's domain");
  return metric_jet<double>(family, Vec4<double>(p.coords));
}

MetricAtPoint orthotoric_metric(const OrthotoricParams& params, const Point& p) {
  return metric_at(OrthotoricFamily{params}, p);
}

MetricAtPoint flat_metric(const Point& p) { return metric_jet<double>(FlatFamily{}, Vec4<double>(p.coords)); }

Eigen::Matrix4d Frame::E_values() const {
  Eigen::Matrix4d out;
  for (int a = 0; a < 4; ++a) out.col(a) = values(E[static_cast<std::size_t>(a)]);
  return out;
}

Eigen::Matrix4d Frame::theta_values() const {
  Eigen::Matrix4d out;
  for (int a = 0; a < 4; ++a) out.row(a) = values(theta[static_cast<std::size_t>(a)]).transpose();
  return out;
}

namespace {

bool near_axis_angle(double phi) {
  return std::abs(std::sin(2.0 * phi)) < 1e-8;
}

}  // namespace

Frame orthotoric_frame(const OrthotoricParams& params, const Point& p) {
  if (!params.admits(p.coords)) throw DomainError("point outside the orthotoric domain");
  const VecJ q = seed(p.coords);
  const Jetd& x = q(0);
  const Jetd& y = q(1);
  const Jetd a = sqrt(params.F(x));
  const Jetd b = sqrt(params.G(y));
  const Jetd h = reciprocal(sqrt(x - y));
  const Jetd zero(0.0);

  Frame fr;
  fr.point = p;
  fr.E[0] = VecJ(h * a, zero, zero, zero);
  fr.E[1] = VecJ(zero, -(h * b), zero, zero);
  fr.E[2] = VecJ(zero, zero, h * x / a, h / a);
  fr.E[3] = VecJ(zero, zero, h * y / b, h / b);

  fr.theta[0] = VecJ(reciprocal(h * a), zero, zero, zero);
  fr.theta[1] = VecJ(zero, -reciprocal(h * b), zero, zero);
  fr.theta[2] = VecJ(zero, zero, a * h, -(a * h * y));
  fr.theta[3] = VecJ(zero, zero, -(b * h), b * h * x);

  const Jetd h3 = h * h * h;
  fr.alpha_cos = a * h3;
  fr.alpha_sin = b * h3;
  fr.alpha = sqrt(fr.alpha_cos * fr.alpha_cos + fr.alpha_sin * fr.alpha_sin);
  fr.phi = atan2(fr.alpha_sin, fr.alpha_cos);
  fr.degenerate = near_axis_angle(fr.phi.v);
  fr.profiles = params;
  return fr;
}

Frame flat_frame(const Point& p) {
  Frame fr;
  fr.point = p;
  for (int a = 0; a < 4; ++a) {
    VecJ e;
    for (int i = 0; i < 4; ++i) e(i) = Jetd(a == i ? 1.0 : 0.0);
    fr.E[static_cast<std::size_t>(a)] = e;
    fr.theta[static_cast<std::size_t>(a)] = e;
  }
  fr.alpha_cos = fr.alpha_sin = fr.alpha = Jetd(0.0);
  fr.phi = Jetd(std::numbers::pi / 4);
  fr.has_angle = false;
  return fr;
}

namespace {

Frame gram_schmidt(const Frame& base, const MatJ& g) {
  Frame fr = base;
  const auto inner = [&g](const VecJ& u, const VecJ& v) {
    Jetd acc(0.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) acc += g(i, j) * u(i) * v(j);
    return acc;
  };
  for (std::size_t a = 0; a < 4; ++a) {
    VecJ e = base.E[a];
    for (std::size_t b = 0; b < a; ++b) {
      const Jetd proj = inner(e, fr.E[b]);
      for (int i = 0; i < 4; ++i) e(i) -= proj * fr.E[b](i);
    }
    const Jetd inv = reciprocal(sqrt(inner(e, e)));
    for (int i = 0; i < 4; ++i) e(i) *= inv;
    fr.E[a] = e;
  }
  for (std::size_t a = 0; a < 4; ++a) {
    VecJ th;
    for (int i = 0; i < 4; ++i) {
      Jetd acc(0.0);
      for (int j = 0; j < 4; ++j) acc += g(i, j) * fr.E[a](j);
      th(i) = acc;
    }
    fr.theta[a] = th;
  }
  fr.has_angle = false;
  fr.profiles.reset();
  return fr;
}

}  // namespace

Frame frame_at(const MetricFamily& family, const Point& p) {
  if (!admits(family, p.coords)) throw DomainError("point outside the family's domain");
  if (std::holds_alternative<FlatFamily>(family)) return flat_frame(p);
  if (const auto* o = std::get_if<OrthotoricFamily>(&family)) return orthotoric_frame(o->params, p);
  const auto& pert = std::get<PerturbedFamily>(family);
  const Frame base = orthotoric_frame(pert.base.params, p);
  return gram_schmidt(base, pert.metric<Jetd>(seed(p.coords)));
}

Frame corrupt_frame(const Frame& frame, double scale) {
  Frame out = frame;
  for (int i = 0; i < 4; ++i) {
    out.E[0](i) *= Jetd(scale);
    out.theta[0](i) *= Jetd(1.0 / scale);
  }
  return out;
}

int orientation_sign(const Frame& frame) {
  Eigen::Matrix4d oriented;
  oriented.col(0) = values(frame.E[0]);
  oriented.col(1) = values(frame.E[2]);
  oriented.col(2) = values(frame.E[1]);
  oriented.col(3) = values(frame.E[3]);
  return oriented.determinant() > 0.0 ? 1 : -1;
}

}  // namespace orthotoric
