#include "orthotoric/symmetry.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace orthotoric {

namespace {

using std::size_t;

// θ₁∧θ₂∧θ₃∧θ₄ = −vol: (E₁, E₃, E₂, E₄) is the positive frame.
constexpr double kFrameVolume = -1.0;

constexpr double kKillingTolerance = 1e-7;
constexpr double kFitTolerance = 1e-4;
constexpr double kBracketTolerance = 1e-8;
constexpr double kTriholomorphicTolerance = 1e-7;

Eigen::Matrix4d frame_unit(int a, int b) {
  Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
  w(a, b) = 1.0;
  w(b, a) = -1.0;
  return w;
}

MatJ coordinate_two_form(const Frame& fr, const Eigen::Matrix4d& frame_form) {
  MatJ out = MatJ::Constant(Jetd(0.0));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (frame_form(a, b) == 0.0) continue;
      const Jetd coef(frame_form(a, b));
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          out(i, j) += coef * fr.theta[static_cast<size_t>(a)](i) * fr.theta[static_cast<size_t>(b)](j);
    }
  return out;
}

Eigen::Matrix<double, 6, 1> upper(const Eigen::Matrix4d& w) {
  Eigen::Matrix<double, 6, 1> out;
  int r = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) out(r++) = w(a, b);
  return out;
}

std::string format_term(double c, const std::string& tag, bool first) {
  std::ostringstream os;
  os << std::setprecision(6);
  if (!first) os << (c < 0.0 ? " - " : " + ");
  else if (c < 0.0) os << "-";
  os << std::abs(c) << "*" << tag;
  return os.str();
}

}  // namespace

KillingCandidate coordinate_field(int axis) {
  if (axis < 0 || axis > 3) throw Error(ErrorCode::kInvalidArgument, "coordinate axis must be 0..3");
  static constexpr std::array<const char*, 4> kTags{"d_x", "d_y", "d_z", "d_t"};
  return {kTags[static_cast<size_t>(axis)], [axis](const VecJ&) {
            VecJ v = VecJ::Constant(Jetd(0.0));
            v(axis) = Jetd(1.0);
            return v;
          }};
}

KillingCandidate linear_combination(const std::vector<std::pair<double, KillingCandidate>>& terms) {
  std::string tag;
  bool first = true;
  for (const auto& [c, f] : terms) {
    if (c == 0.0) continue;
    tag += format_term(c, f.tag, first);
    first = false;
  }
  if (tag.empty()) tag = "0";
  return {tag, [terms](const VecJ& q) {
            VecJ v = VecJ::Constant(Jetd(0.0));
            for (const auto& [c, f] : terms) {
              const VecJ w = f.field(q);
              for (int i = 0; i < 4; ++i) v(i) += Jetd(c) * w(i);
            }
            return v;
          }};
}

Eigen::Matrix4d lie_derivative_metric(const VecJ& xi, const MetricAtPoint& m) {
  Eigen::Matrix4d out = Eigen::Matrix4d::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int k = 0; k < 4; ++k)
        out(a, b) += xi(k).v * m.dg[k](a, b) + m.g(k, b) * xi(k).g(a) + m.g(a, k) * xi(k).g(b);
  return out;
}

Eigen::Matrix4d lie_derivative(const VecJ& xi, const MatJ& w) {
  Eigen::Matrix4d out = Eigen::Matrix4d::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int k = 0; k < 4; ++k)
        out(a, b) += xi(k).v * w(a, b).g(k) + w(k, b).v * xi(k).g(a) + w(a, k).v * xi(k).g(b);
  return out;
}

Eigen::Matrix4d lie_derivative_endomorphism(const VecJ& xi, const MatJ& J) {
  Eigen::Matrix4d out = Eigen::Matrix4d::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int k = 0; k < 4; ++k)
        out(a, b) += xi(k).v * J(a, b).g(k) - J(k, b).v * xi(a).g(k) + J(a, k).v * xi(k).g(b);
  return out;
}

double killing_residual(const KillingCandidate& xi, const MetricFamily& family, const Point& p) {
  const MetricAtPoint m = metric_at(family, p);
  const Frame fr = frame_at(family, p);
  const Eigen::Matrix4d E = fr.E_values();
  return (E.transpose() * lie_derivative_metric(xi.at(p), m) * E).norm();
}

double holomorphy_residual(const KillingCandidate& xi, const AlmostComplexStructure& J, const Point& p) {
  return lie_derivative_endomorphism(xi.at(p), J.J).norm();
}

double volume_residual(const KillingCandidate& xi, const MetricFamily& family, const Point& p) {
  const MetricAtPoint m = metric_at(family, p);
  const Eigen::Matrix4d g_inv = m.g.inverse();
  const VecJ v = xi.at(p);
  double div = 0.0;
  for (int k = 0; k < 4; ++k) div += v(k).g(k) + 0.5 * v(k).v * (g_inv * m.dg[k]).trace();
  return std::abs(div);
}

double bracket_residual(const KillingCandidate& xi, const KillingCandidate& zeta, const Point& p) {
  return lie_bracket(xi.at(p), zeta.at(p)).norm();
}

std::optional<HyperkahlerParams> hyperkahler_shape(const Frame& frame) {
  if (!frame.profiles) return std::nullopt;
  return match_hyperkahler_shape(frame.profiles->F, frame.profiles->G);
}

Jetd sphere_angle(const Frame& frame, double psi0, const HyperkahlerParams& hk) {
  const VecJ q = seed(frame.point.coords);
  return Jetd(hk.c) * q(2) + Jetd(hk.a) * q(3) + Jetd(psi0);
}

MatJ kahler_sphere(const Frame& frame, double psi0, const HyperkahlerParams& hk) {
  const auto shape = hyperkahler_shape(frame);
  const auto close = [](double u, double v) { return std::abs(u - v) <= 1e-12 * std::max(1.0, std::abs(u)); };
  if (!shape || !close(shape->c, hk.c) || !close(shape->a, hk.a) || !close(shape->b1, hk.b1) ||
      !close(shape->b2, hk.b2)) {
    throw Error(ErrorCode::kInvalidArgument, "frame profiles are not the requested hyperkähler profiles");
  }
  const Jetd psi = sphere_angle(frame, psi0, hk);
  const MatJ first = coordinate_two_form(frame, frame_unit(0, 1) - frame_unit(2, 3));
  const MatJ second = coordinate_two_form(frame, frame_unit(1, 2) - frame_unit(0, 3));
  const Jetd cs = cos(psi);
  const Jetd sn = sin(psi);
  MatJ out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = cs * first(i, j) + sn * second(i, j);
  return out;
}

AlmostComplexStructure complex_structure_of(const Frame& frame, const MatJ& w) {
  MatJ g_inv = MatJ::Constant(Jetd(0.0));
  for (const VecJ& e : frame.E)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g_inv(i, j) += e(i) * e(j);
  MatJ J = MatJ::Constant(Jetd(0.0));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int k = 0; k < 4; ++k) J(a, b) -= g_inv(a, k) * w(k, b);
  return {J};
}

std::array<Eigen::Matrix4d, 3> HyperkahlerTriple::frame_components() const {
  std::array<Eigen::Matrix4d, 3> out;
  const Eigen::Matrix4d E = frame.E_values();
  for (size_t i = 0; i < 3; ++i) out[i] = on_basis(values(omega[i]), E);
  return out;
}

double HyperkahlerTriple::wedge_orthogonality() const {
  const auto w = frame_components();
  double worst = 0.0;
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = i + 1; j < 3; ++j) worst = std::max(worst, std::abs(wedge_top(w[i], w[j])));
  return worst;
}

double HyperkahlerTriple::volume_normalization() const {
  const auto w = frame_components();
  double worst = 0.0;
  for (size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(wedge_top(w[i], w[i]) / kFrameVolume - 2.0));
  return worst;
}

HyperkahlerTriple hyperkahler_triple(const Frame& frame, const HyperkahlerParams& hk) {
  HyperkahlerTriple out;
  out.frame = frame;
  out.omega[0] = kahler_forms(frame).omega_J;
  out.omega[1] = kahler_sphere(frame, 0.0, hk);
  out.omega[2] = kahler_sphere(frame, std::numbers::pi / 2, hk);
  return out;
}

double parallel_residual(const MetricFamily& family, const Frame& frame, const MatJ& two_form) {
  const MetricAtPoint m = metric_at(family, frame.point);
  const auto gamma = christoffel(m);
  return frobenius(on_basis(covariant_derivative(gamma, two_form), frame.E_values()));
}

std::vector<Point> fit_grid(const Rectangle& box) {
  static constexpr std::array<int, 4> kCounts{4, 4, 2, 2};
  std::vector<Point> out;
  out.reserve(64);
  const auto center = [&box](int axis, int k) {
    const auto [lo, hi] = box.axis(axis);
    return lo + (hi - lo) * (k + 0.5) / kCounts[static_cast<size_t>(axis)];
  };
  for (int i = 0; i < kCounts[0]; ++i)
    for (int j = 0; j < kCounts[1]; ++j)
      for (int k = 0; k < kCounts[2]; ++k)
        for (int l = 0; l < kCounts[3]; ++l) out.emplace_back(center(0, i), center(1, j), center(2, k), center(3, l));
  return out;
}

PhiFit phi_homomorphism(const KillingCandidate& xi, const MetricFamily& family, const HyperkahlerParams& hk,
                        const std::vector<Point>& grid) {
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty fit grid");
  const auto n = static_cast<Eigen::Index>(grid.size());
  std::array<Eigen::MatrixXd, 3> lhs;
  std::array<Eigen::VectorXd, 3> rhs;
  for (size_t i = 0; i < 3; ++i) {
    lhs[i].resize(6 * n, 3);
    rhs[i].resize(6 * n);
  }
  PhiFit fit;
  for (Eigen::Index r = 0; r < n; ++r) {
    const Point& p = grid[static_cast<size_t>(r)];
    fit.killing = std::max(fit.killing, killing_residual(xi, family, p));
    const Frame fr = frame_at(family, p);
    const HyperkahlerTriple triple = hyperkahler_triple(fr, hk);
    const auto basis = triple.frame_components();
    const VecJ v = xi.at(p);
    const Eigen::Matrix4d E = fr.E_values();
    for (size_t i = 0; i < 3; ++i) {
      rhs[i].segment<6>(6 * r) = upper(on_basis(lie_derivative(v, triple.omega[i]), E));
      for (Eigen::Index j = 0; j < 3; ++j) lhs[i].block<6, 1>(6 * r, j) = upper(basis[static_cast<size_t>(j)]);
    }
  }
  if (!(fit.killing <= kKillingTolerance)) {
    throw Error(ErrorCode::kInvalidArgument, xi.tag + " is not a Killing field of the family");
  }
  for (size_t i = 0; i < 3; ++i) {
    const Eigen::Vector3d row = lhs[i].colPivHouseholderQr().solve(rhs[i]);
    fit.A.row(static_cast<Eigen::Index>(i)) = row.transpose();
    const Eigen::VectorXd res = lhs[i] * row - rhs[i];
    for (Eigen::Index r = 0; r < n; ++r) fit.fit_residual = std::max(fit.fit_residual, res.segment<6>(6 * r).norm());
  }
  fit.antisymmetry = (fit.A + fit.A.transpose()).norm();
  fit.diagonal = fit.A.diagonal().cwiseAbs().maxCoeff();
  if (!(fit.fit_residual <= kFitTolerance)) {
    throw Error(ErrorCode::kInvalidArgument, xi.tag + " does not preserve the hyperkähler structure");
  }
  return fit;
}

Eigen::Vector3d find_holomorphic_structure(const Eigen::Matrix3d& A) {
  const Eigen::Matrix3d S = 0.5 * (A - A.transpose());
  const Eigen::Vector3d axis(S(1, 2), -S(0, 2), S(0, 1));
  const double n = axis.norm();
  if (n <= 1e-14) return Eigen::Vector3d::UnitX();
  return axis / n;
}

double structure_lie_residual(const KillingCandidate& xi, const Eigen::Vector3d& alpha, const MetricFamily& family,
                              const HyperkahlerParams& hk, const std::vector<Point>& grid) {
  double worst = 0.0;
  for (const Point& p : grid) {
    const Frame fr = frame_at(family, p);
    const HyperkahlerTriple triple = hyperkahler_triple(fr, hk);
    MatJ w = MatJ::Constant(Jetd(0.0));
    for (size_t i = 0; i < 3; ++i) w += Jetd(alpha(static_cast<Eigen::Index>(i))) * triple.omega[i];
    const VecJ v = xi.at(p);
    worst = std::max(worst, two_form_norm(on_basis(lie_derivative(v, w), fr.E_values())));
    worst = std::max(worst, lie_derivative_endomorphism(v, complex_structure_of(fr, w).J).norm());
  }
  return worst;
}

TriholomorphicResult triholomorphic_scan(const std::vector<KillingCandidate>& fields, const MetricFamily& family,
                                         const HyperkahlerParams& hk, const std::vector<Point>& grid) {
  if (fields.empty()) throw Error(ErrorCode::kInvalidArgument, "no candidate fields");
  TriholomorphicResult out;
  for (size_t i = 0; i < fields.size(); ++i)
    for (size_t j = i + 1; j < fields.size(); ++j)
      for (const Point& p : grid) out.bracket = std::max(out.bracket, bracket_residual(fields[i], fields[j], p));
  if (!(out.bracket <= kBracketTolerance)) throw Error(ErrorCode::kInvalidArgument, "candidate fields do not commute");

  const auto m = static_cast<Eigen::Index>(fields.size());
  Eigen::MatrixXd images(9, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    out.fits.push_back(phi_homomorphism(fields[static_cast<size_t>(k)], family, hk, grid));
    images.col(k) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(out.fits.back().A.data());
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(images, Eigen::ComputeFullV);
  Eigen::VectorXd coef;
  if (m > 9 || svd.singularValues()(m - 1) <= kTriholomorphicTolerance) {
    coef = svd.matrixV().col(m - 1);
  } else {
    out.tag = "NONE-FOUND";
    return out;
  }
  for (Eigen::Index k = 0; k < m; ++k)
    if (std::abs(coef(k)) < 1e-13) coef(k) = 0.0;
  coef.normalize();
  for (Eigen::Index k = 0; k < m; ++k) {
    if (coef(k) == 0.0) continue;
    if (coef(k) < 0.0) coef = -coef;
    break;
  }

  std::vector<std::pair<double, KillingCandidate>> terms;
  for (Eigen::Index k = 0; k < m; ++k) terms.emplace_back(coef(k), fields[static_cast<size_t>(k)]);
  const KillingCandidate combo = linear_combination(terms);
  out.coefficients.assign(coef.data(), coef.data() + m);
  out.tag = combo.tag;

  for (const Point& p : grid) {
    const Frame fr = frame_at(family, p);
    const HyperkahlerTriple triple = hyperkahler_triple(fr, hk);
    const VecJ v = combo.at(p);
    for (const MatJ& w : triple.omega)
      out.lie_residual = std::max(out.lie_residual, two_form_norm(on_basis(lie_derivative(v, w), fr.E_values())));
  }
  out.found = out.lie_residual <= kTriholomorphicTolerance;
  if (!out.found) out.tag = "NONE-FOUND";
  return out;
}

}  // namespace orthotoric
