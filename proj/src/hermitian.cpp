#include "orthotoric/hermitian.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>

namespace orthotoric {

namespace {

using std::size_t;

MatJ frame_columns(const Frame& fr) {
  MatJ E;
  for (int a = 0; a < 4; ++a) E.col(a) = fr.E[static_cast<size_t>(a)];
  return E;
}

MatJ coframe_rows(const Frame& fr) {
  MatJ T;
  for (int a = 0; a < 4; ++a) T.row(a) = fr.theta[static_cast<size_t>(a)].transpose();
  return T;
}

/// Endomorphism with frame matrix S (column a = image of E_a) in coordinates.
AlmostComplexStructure from_frame_matrix(const Frame& fr, const Eigen::Matrix4d& S) {
  return {frame_columns(fr) * S.cast<Jetd>() * coframe_rows(fr)};
}

Eigen::Matrix4d unit(int a, int b) {
  Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
  w(a, b) = 1.0;
  w(b, a) = -1.0;
  return w;
}

/// θ_{a+1}∧θ_{b+1} in frame components, with 1-based labels for readability.
Eigen::Matrix4d th(int a, int b) { return unit(a - 1, b - 1); }

/// E_a(f) at the point.
double along(const Frame& fr, int a, const Jetd& f) {
  return directional_value(fr.E[static_cast<size_t>(a - 1)], f);
}

/// E_a(ln f) = E_a(f)/f, with 0/0 read as 0 (flat frames carry α = 0).
double along_log(const Frame& fr, int a, const Jetd& f) {
  const double num = along(fr, a, f);
  if (f.v == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / f.v;
}

/// Jet of the one-form df with exact first derivatives.
VecJ differential(const Jetd& f) {
  VecJ out;
  for (int a = 0; a < 4; ++a) out(a) = Jetd(f.g(a), f.H.row(a).transpose(), Eigen::Matrix4d::Zero());
  return out;
}

Eigen::Matrix4d frame_two_form(const Eigen::Matrix4d& w, const Frame& fr) { return on_basis(w, fr.E_values()); }

double three_form_residual(const ThreeForm& w, const Frame& fr) { return w.on_basis(fr.E_values()).norm(); }

}  // namespace

AlmostComplexStructure complex_structure_J(const Frame& fr) {
  Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
  S(2, 0) = 1.0;
  S(0, 2) = -1.0;
  S(3, 1) = 1.0;
  S(1, 3) = -1.0;
  return from_frame_matrix(fr, S);
}

AlmostComplexStructure complex_structure_I(const Frame& fr) {
  Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
  S(2, 0) = -1.0;
  S(0, 2) = 1.0;
  S(3, 1) = 1.0;
  S(1, 3) = -1.0;
  return from_frame_matrix(fr, S);
}

double square_residual(const AlmostComplexStructure& J) {
  const Eigen::Matrix4d v = J.value();
  return (v * v + Eigen::Matrix4d::Identity()).norm();
}

double orthogonality_residual(const AlmostComplexStructure& J, const Eigen::Matrix4d& g) {
  const Eigen::Matrix4d v = J.value();
  return (v.transpose() * g * v - g).norm();
}

double product_split_residual(const Frame& fr) {
  const Eigen::Matrix4d J = complex_structure_J(fr).value();
  const Eigen::Matrix4d I = complex_structure_I(fr).value();
  const Eigen::Matrix4d E = fr.E_values();
  const Eigen::Matrix4d IJ = I * J;
  double worst = (IJ - J * I).norm();
  for (int a = 0; a < 4; ++a) {
    const double sign = (a == 0 || a == 2) ? 1.0 : -1.0;
    worst = std::max(worst, (IJ * E.col(a) - sign * E.col(a)).norm());
  }
  return worst;
}

double nijenhuis(const AlmostComplexStructure& Js) {
  const MatJ& J = Js.J;
  double acc = 0.0;
  for (int k = 0; k < 4; ++k)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double n = 0.0;
        for (int m = 0; m < 4; ++m) {
          n += J(m, a).v * J(k, b).g(m) - J(m, b).v * J(k, a).g(m);
          n += J(k, m).v * (J(m, a).g(b) - J(m, b).g(a));
        }
        acc += n * n;
      }
  return std::sqrt(acc);
}

KahlerForms kahler_forms(const Frame& fr) {
  const MatJ w13 = wedge(fr.theta[0], fr.theta[2]);
  const MatJ w24 = wedge(fr.theta[1], fr.theta[3]);
  return {w13 + w24, w24 - w13};
}

double kahler_closed_residual(const Frame& fr) {
  return three_form_residual(exterior_derivative(kahler_forms(fr).omega_J), fr);
}

VecJ lee_form(const Frame& fr) {
  VecJ out;
  for (int i = 0; i < 4; ++i) out(i) = fr.alpha_cos * fr.theta[0](i) + fr.alpha_sin * fr.theta[1](i);
  return out;
}

double lee_relation_residual(const Frame& fr) {
  const MatJ wI = kahler_forms(fr).omega_I;
  ThreeForm r = exterior_derivative(wI);
  r -= wedge(Eigen::Vector4d(2.0 * values(lee_form(fr))), values(wI));
  return three_form_residual(r, fr);
}

LeeExtraction extract_lee_form(const Frame& fr) {
  const MatJ wIj = kahler_forms(fr).omega_I;
  const Eigen::Matrix4d wI = values(wIj);
  const ThreeForm dw = exterior_derivative(wIj);
  static constexpr std::array<std::array<int, 3>, 4> kTriples{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  Eigen::Matrix4d M;
  Eigen::Vector4d rhs;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d e = Eigen::Vector4d::Zero();
    e(k) = 2.0;
    const ThreeForm col = wedge(e, wI);
    for (int r = 0; r < 4; ++r) {
      const auto& t = kTriples[static_cast<size_t>(r)];
      M(r, k) = col(t[0], t[1], t[2]);
    }
  }
  for (int r = 0; r < 4; ++r) {
    const auto& t = kTriples[static_cast<size_t>(r)];
    rhs(r) = dw(t[0], t[1], t[2]);
  }
  LeeExtraction out;
  out.eta = M.colPivHouseholderQr().solve(rhs);
  ThreeForm res = dw;
  res -= wedge(Eigen::Vector4d(2.0 * out.eta), wI);
  out.residual = three_form_residual(res, fr);
  if (!(out.residual <= 1e-6)) {
    throw Error(ErrorCode::kInvalidArgument, "dω_I is not of the form 2θ∧ω_I");
  }
  return out;
}

Eigen::Matrix4d lee_form_derivative(const Frame& fr) { return exterior_derivative(lee_form(fr)); }

double lee_derivative_display_residual(const Frame& fr) {
  const Jetd& P = fr.alpha_cos;
  const Jetd& Q = fr.alpha_sin;
  const double h = along(fr, 2, P) - along(fr, 1, Q);
  const double k = along(fr, 4, Q) + along(fr, 3, P);
  const double l = along(fr, 3, Q) - along(fr, 4, P);
  const Eigen::Matrix4d display = h * (th(2, 1) + th(3, 4)) + k * (th(4, 2) + th(3, 1)) + l * (th(3, 2) + th(1, 4));
  return two_form_norm(frame_two_form(lee_form_derivative(fr), fr) - display);
}

double alpha_from_nabla(const Frame& fr, const Christoffel<double>& gamma) {
  const auto nabla = on_basis(covariant_derivative(gamma, kahler_forms(fr).omega_I), fr.E_values());
  return frobenius(nabla) / (2.0 * std::numbers::sqrt2);
}

std::array<double, 4> structure_equation_residuals(const Frame& fr) {
  const Jetd& P = fr.alpha_cos;
  const Jetd& Q = fr.alpha_sin;
  const double p = P.v, q = Q.v;
  const auto lnP = [&](int a) { return along_log(fr, a, P); };
  const auto lnQ = [&](int a) { return along_log(fr, a, Q); };

  std::array<Eigen::Matrix4d, 4> rhs;
  rhs[0] = -0.5 * q * th(1, 2) + lnP(4) * th(2, 3) - lnP(3) * th(1, 3) + (1.5 * q + lnP(2)) * th(3, 4);
  rhs[1] = 0.5 * p * th(1, 2) + lnQ(3) * th(1, 4) - lnQ(4) * th(2, 4) - (1.5 * p + lnQ(1)) * th(3, 4);
  rhs[2] = 0.5 * q * th(2, 3) + lnP(4) * th(1, 2) + p * th(2, 4) + (1.5 * q + lnP(2)) * th(4, 1) +
           (p + lnP(1)) * th(1, 3);
  rhs[3] = q * th(1, 3) - lnQ(3) * th(1, 2) + 0.5 * p * th(1, 4) + (1.5 * p + lnQ(1)) * th(3, 2) +
           (q + lnQ(2)) * th(2, 4);

  std::array<double, 4> out{};
  for (size_t i = 0; i < 4; ++i)
    out[i] = two_form_norm(frame_two_form(exterior_derivative(fr.theta[i]), fr) - rhs[i]);
  return out;
}

std::array<double, 6> lie_bracket_residuals(const Frame& fr) {
  const Jetd& P = fr.alpha_cos;
  const Jetd& Q = fr.alpha_sin;
  const double p = P.v, q = Q.v;
  const auto lnP = [&](int a) { return along_log(fr, a, P); };
  const auto lnQ = [&](int a) { return along_log(fr, a, Q); };
  const auto frame_vec = [](double c1, double c2, double c3, double c4) { return Eigen::Vector4d(c1, c2, c3, c4); };

  const std::array<std::pair<int, int>, 6> pairs{{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}};
  const std::array<Eigen::Vector4d, 6> rhs{
      frame_vec(0.5 * q, -0.5 * p, -lnP(4), lnQ(3)),
      frame_vec(lnP(3), 0.0, -(p + lnP(1)), -q),
      frame_vec(0.0, -lnQ(3), 1.5 * q + lnP(2), -0.5 * p),
      frame_vec(-lnP(4), 0.0, -0.5 * q, 1.5 * p + lnQ(1)),
      frame_vec(0.0, lnQ(4), -p, -(q + lnQ(2))),
      frame_vec(-(1.5 * q + lnP(2)), 1.5 * p + lnQ(1), 0.0, 0.0),
  };
  const Eigen::Matrix4d T = fr.theta_values();
  std::array<double, 6> out{};
  for (size_t n = 0; n < 6; ++n) {
    const auto [i, j] = pairs[n];
    const Eigen::Vector4d b = lie_bracket(fr.E[static_cast<size_t>(i - 1)], fr.E[static_cast<size_t>(j - 1)]);
    out[n] = (T * b - rhs[n]).norm();
  }
  return out;
}

ConnectionTable connection_forms(const Frame& fr, const Christoffel<double>& gamma) {
  const Eigen::Matrix4d E = fr.E_values();
  const Eigen::Matrix4d T = fr.theta_values();
  ConnectionTable out;
  for (size_t i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const Eigen::Vector4d nabla = T * covariant_derivative(gamma, fr.E[i], E.col(k));
      for (size_t j = 0; j < 4; ++j) out[j][i](k) = nabla(static_cast<Eigen::Index>(j));
    }
  return out;
}

double connection_form_residual(const Frame& fr, const Christoffel<double>& gamma) {
  const ConnectionTable w = connection_forms(fr, gamma);
  const Jetd& P = fr.alpha_cos;
  const Jetd& Q = fr.alpha_sin;
  const double p = P.v, q = Q.v;
  const auto lnP = [&](int a) { return along_log(fr, a, P); };
  const auto lnQ = [&](int a) { return along_log(fr, a, Q); };
  const auto at = [&w](int upper, int lower) -> const Eigen::Vector4d& {
    return w[static_cast<size_t>(upper - 1)][static_cast<size_t>(lower - 1)];
  };

  const Eigen::Vector4d half12(0.5 * q, -0.5 * p, 0.0, 0.0);
  const Eigen::Vector4d half41(0.0, 0.0, 0.5 * q, 0.5 * p);
  const Eigen::Vector4d w31(-lnP(3), lnP(4), p + lnP(1), -(q + lnP(2)));
  const Eigen::Vector4d w42(lnQ(3), -lnQ(4), -(p + lnQ(1)), q + lnQ(2));

  double worst = 0.0;
  worst = std::max(worst, (at(1, 2) - half12).norm());
  worst = std::max(worst, (at(3, 4) - half12).norm());
  worst = std::max(worst, (at(4, 1) - half41).norm());
  worst = std::max(worst, (at(3, 2) - half41).norm());
  worst = std::max(worst, (at(3, 1) - w31).norm());
  worst = std::max(worst, (at(4, 2) - w42).norm());
  return worst;
}

RicciFormCheck ricci_form_identity(const Frame& fr, const CurvatureD& curv) {
  const Eigen::Matrix4d J = complex_structure_J(fr).value();
  const AlmostComplexStructure I = complex_structure_I(fr);
  const Eigen::Matrix4d Iv = I.value();
  const Eigen::Matrix4d rho = J.transpose() * curv.ricci;

  const Jetd log_tan = log(abs(fr.alpha_sin)) - log(abs(fr.alpha_cos));
  const VecJ df = differential(log_tan);
  VecJ twisted;
  for (int b = 0; b < 4; ++b) {
    Jetd acc(0.0);
    for (int a = 0; a < 4; ++a) acc += df(a) * I.J(a, b);
    twisted(b) = Jetd(kTwistedDifferentialSign) * acc;
  }
  const Eigen::Matrix4d target = exterior_derivative(twisted);

  RicciFormCheck out;
  out.identity = two_form_norm(frame_two_form(rho - target, fr));
  out.j_invariance = two_form_norm(frame_two_form(J.transpose() * rho * J - rho, fr));
  out.i_invariance = two_form_norm(frame_two_form(Iv.transpose() * rho * Iv - rho, fr));
  out.rho_norm = two_form_norm(frame_two_form(rho, fr));
  out.opposite_sign = two_form_norm(frame_two_form(rho + target, fr));
  return out;
}

IntegrabilityPredicates integrability_predicates(const Frame& fr) {
  const Jetd& P = fr.alpha_cos;
  const Jetd& Q = fr.alpha_sin;
  IntegrabilityPredicates out;
  for (int a = 1; a <= 4; ++a) {
    out.dP(a - 1) = along(fr, a, P);
    out.dQ(a - 1) = along(fr, a, Q);
  }
  out.k = out.dQ(3) + out.dP(2);
  out.l = out.dQ(2) - out.dP(3);
  out.h = out.dP(1) - out.dQ(0);
  out.defined = P.v != 0.0 && Q.v != 0.0;
  if (out.defined) {
    out.f = 1.5 * Q.v + out.dP(1) / P.v;
    out.g = 1.5 * P.v + out.dQ(0) / Q.v;
  } else {
    out.f = out.g = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

Frame special_frame(const Frame& fr) {
  const Jetd inv = reciprocal(fr.alpha);
  const Jetd c = fr.alpha_cos * inv;
  const Jetd s = fr.alpha_sin * inv;
  const auto combo = [](const Jetd& u, const VecJ& A, const Jetd& v, const VecJ& B) {
    VecJ out;
    for (int i = 0; i < 4; ++i) out(i) = u * A(i) + v * B(i);
    return out;
  };
  Frame out = fr;
  const auto& E = fr.E;
  const auto& T = fr.theta;
  out.E[0] = combo(c, E[3], s, E[2]);
  out.E[1] = combo(-c, E[1], s, E[0]);
  out.E[2] = combo(-c, E[2], s, E[3]);
  out.E[3] = combo(-c, E[0], -s, E[1]);
  out.theta[0] = combo(c, T[3], s, T[2]);
  out.theta[1] = combo(-c, T[1], s, T[0]);
  out.theta[2] = combo(-c, T[2], s, T[3]);
  out.theta[3] = combo(-c, T[0], -s, T[1]);
  return out;
}

AngleCheck frame_angle_vs_distribution(const Frame& fr, const Frame& special) {
  const Eigen::Matrix4d T = fr.theta_values();
  Eigen::Matrix4d cols;
  cols.col(0) = T * values(fr.E[0]);
  cols.col(1) = T * values(fr.E[2]);
  cols.col(2) = T * values(special.E[2]);
  cols.col(3) = T * values(special.E[3]);
  AngleCheck out;
  out.sin_gamma = std::abs(cols.determinant());
  const double s = std::sin(fr.phi.v);
  out.residual = std::abs(out.sin_gamma - s * s);
  return out;
}

std::array<double, 5> special_frame_relations(const Frame& sp, const Christoffel<double>& gamma) {
  const ConnectionTable w = connection_forms(sp, gamma);
  // Γ^i_kj = ω^i_j(E_k), 1-based labels.
  const auto G = [&w](int i, int k, int j) {
    return w[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)](k - 1);
  };
  const double alpha = sp.alpha.v;
  const double e3 = along_log(sp, 3, sp.alpha);
  const double e4 = along_log(sp, 4, sp.alpha);

  std::array<double, 5> out{};
  out[0] = std::max(std::abs(G(3, 1, 1) - e3), std::abs(G(3, 2, 2) - e3));
  out[1] = std::max({std::abs(G(3, 4, 4) + e3), std::abs(G(4, 2, 1) + e3), std::abs(G(4, 1, 2) - e3)});
  out[2] = std::max(std::abs(G(3, 2, 1) + G(3, 1, 2)), std::abs(G(4, 1, 1) - G(4, 2, 2)));
  out[3] = std::abs(-G(3, 2, 1) + G(4, 2, 2) - alpha);
  out[4] = std::abs(G(4, 3, 3) - (-e4 + alpha));
  return out;
}

AngleConstancySample angle_constancy_sample(const Frame& fr) {
  AngleConstancySample out;
  out.predicates = integrability_predicates(fr);
  out.lee_derivative_norm = two_form_norm(frame_two_form(lee_form_derivative(fr), fr));
  double acc = 0.0;
  for (int a = 1; a <= 4; ++a) acc += std::pow(along(fr, a, fr.phi), 2);
  out.phi_gradient_norm = std::sqrt(acc);
  return out;
}

AngleConstancyVerdict angle_constancy(const std::vector<AngleConstancySample>& samples) {
  AngleConstancyVerdict v;
  v.hypothesis = !samples.empty();
  bool integrable = true;
  bool constant = true;
  for (const auto& s : samples) {
    const auto& p = s.predicates;
    const double vertical = std::max({std::abs(p.dP(2)), std::abs(p.dP(3)), std::abs(p.dQ(2)), std::abs(p.dQ(3))});
    if (vertical > 1e-9 || s.lee_derivative_norm > 1e-9) v.hypothesis = false;
    if (!p.defined || std::max(std::abs(p.f), std::abs(p.g)) > 1e-7) integrable = false;
    if (s.phi_gradient_norm > 1e-7) constant = false;
  }
  v.conclusion = integrable || constant;
  return v;
}

}  // namespace orthotoric
