#pragma once

// Complex structures, Kähler and Lee forms, and the frame identities of a
// generalized orthotoric surface evaluated as numerical residuals.
//
// Frame-indexed quantities use a = 0..3 for E₁..E₄. With P = α cos φ and
// Q = α sin φ, the complex structures act by
//   J E₁ = E₃, J E₂ = E₄;   I E₁ = −E₃, I E₂ = E₄,
// and ω(X, Y) = g(·X, Y) gives ω_J = θ₁∧θ₃ + θ₂∧θ₄, ω_I = −θ₁∧θ₃ + θ₂∧θ₄.
// Residual norms are Frobenius over frame components.

#include "orthotoric/curvature.hpp"

#include <array>
#include <optional>
#include <vector>

namespace orthotoric {

/// Sign s in the twisted differential dᴵf(X) = s · df(IX). The Ricci-form
/// identity ρ = d(dᴵ ln tan φ) with ρ(X, Y) = Ric(JX, Y) holds for s = +1.
inline constexpr double kTwistedDifferentialSign = 1.0;

/// Endomorphism field with (JX)^a = J(a, b) X^b, as jets at one point.
struct AlmostComplexStructure {
  MatJ J;

  [[nodiscard]] Eigen::Matrix4d value() const { return values(J); }
};

AlmostComplexStructure complex_structure_J(const Frame& frame);
AlmostComplexStructure complex_structure_I(const Frame& frame);

/// ‖J² + Id‖.
double square_residual(const AlmostComplexStructure& J);
/// ‖Jᵀ g J − g‖.
double orthogonality_residual(const AlmostComplexStructure& J, const Eigen::Matrix4d& g);
/// max of ‖IJ − JI‖ and of IJ ∓ Id restricted to span{E₁, E₃} / span{E₂, E₄}.
double product_split_residual(const Frame& frame);

/// Nijenhuis tensor N(X, Y) = [JX, JY] − J[JX, Y] − J[X, JY] − [X, Y] on the
/// coordinate basis; Frobenius norm of its components.
double nijenhuis(const AlmostComplexStructure& J);

struct KahlerForms {
  MatJ omega_J;
  MatJ omega_I;
};

KahlerForms kahler_forms(const Frame& frame);

/// ‖dω_J‖.
double kahler_closed_residual(const Frame& frame);

/// Lee form of I: α(cos φ θ₁ + sin φ θ₂) = P θ₁ + Q θ₂.
VecJ lee_form(const Frame& frame);

/// ‖dω_I − 2θ∧ω_I‖ with θ from lee_form.
double lee_relation_residual(const Frame& frame);

struct LeeExtraction {
  Eigen::Vector4d eta;   // coordinate components
  double residual = 0.0; // ‖dω_I − 2η∧ω_I‖
};

/// Least-squares η with dω_I = 2η∧ω_I; throws Error when the residual of
/// the fit exceeds 1e−6 (I is then not locally conformally Kähler-shaped).
LeeExtraction extract_lee_form(const Frame& frame);

/// dθ of the Lee form (coordinate components).
Eigen::Matrix4d lee_form_derivative(const Frame& frame);

/// dθ against (E₂P − E₁Q)(θ₂₁ + θ₃₄) + (E₄Q + E₃P)(θ₄₂ + θ₃₁) + (E₃Q − E₄P)(θ₃₂ + θ₁₄).
double lee_derivative_display_residual(const Frame& frame);

/// |∇ω_I| / (2√2), the norm over all frame components of ∇ω_I.
double alpha_from_nabla(const Frame& frame, const Christoffel<double>& gamma);

/// ‖dθᵢ − (displayed right-hand side)‖ for i = 1..4.
std::array<double, 4> structure_equation_residuals(const Frame& frame);

/// ‖[Eᵢ, Eⱼ] − (displayed right-hand side)‖ in the order
/// [E₁,E₂], [E₁,E₃], [E₁,E₄], [E₂,E₃], [E₂,E₄], [E₃,E₄].
std::array<double, 6> lie_bracket_residuals(const Frame& frame);

/// conn[j][i] holds ωʲᵢ on the frame: ωʲᵢ(E_k) = θⱼ(∇_{E_k} Eᵢ).
using ConnectionTable = std::array<std::array<Eigen::Vector4d, 4>, 4>;

ConnectionTable connection_forms(const Frame& frame, const Christoffel<double>& gamma);

/// Largest deviation of the connection table from
///   2ω¹₂ = Qθ₁ − Pθ₂ = 2ω³₄,   2ω⁴₁ = Qθ₃ + Pθ₄ = 2ω³₂,
/// and the displayed ω³₁, ω⁴₂.
double connection_form_residual(const Frame& frame, const Christoffel<double>& gamma);

struct RicciFormCheck {
  double identity = 0.0;      // ‖ρ − d(dᴵ ln tan φ)‖
  double j_invariance = 0.0;  // ‖ρ(J·, J·) − ρ‖
  double i_invariance = 0.0;  // ‖ρ(I·, I·) − ρ‖
  double rho_norm = 0.0;
  double opposite_sign = 0.0;  // ‖ρ + d(dᴵ ln tan φ)‖, the other convention
};

/// ρ(X, Y) = Ric(JX, Y) against d(dᴵ ln |tan φ|).
RicciFormCheck ricci_form_identity(const Frame& frame, const CurvatureD& curvature);

struct IntegrabilityPredicates {
  double f = 0.0;  // (3/2)Q + E₂ ln P
  double g = 0.0;  // (3/2)P + E₁ ln Q
  double k = 0.0;  // E₄Q + E₃P
  double l = 0.0;  // E₃Q − E₄P
  double h = 0.0;  // E₂P − E₁Q
  /// E_a P and E_a Q.
  Eigen::Vector4d dP = Eigen::Vector4d::Zero();
  Eigen::Vector4d dQ = Eigen::Vector4d::Zero();
  /// f and g need P, Q ≠ 0.
  bool defined = true;
};

IntegrabilityPredicates integrability_predicates(const Frame& frame);

/// The special frame recovered from the distinguished one:
///   E₁′ = cos φ E₄ + sin φ E₃,   E₂′ = −cos φ E₂ + sin φ E₁,
///   E₃′ = −cos φ E₃ + sin φ E₄,  E₄′ = −cos φ E₁ − sin φ E₂.
/// The angle data is carried over unchanged.
Frame special_frame(const Frame& frame);

struct AngleCheck {
  double sin_gamma = 0.0;  // |vol(E₁, E₃, E₃′, E₄′)|
  double residual = 0.0;   // |sin γ − sin² φ|
};

AngleCheck frame_angle_vs_distribution(const Frame& frame, const Frame& special);

/// Residuals of the relations on the special frame, with Γⁱ_kj = ωⁱⱼ(E_k′):
///   (a) Γ³₁₁ = Γ³₂₂ = E₃′ ln α
///   (b) Γ³₄₄ = Γ⁴₂₁ = −Γ⁴₁₂ = −E₃′ ln α
///   (c) Γ³₂₁ = −Γ³₁₂, Γ⁴₁₁ = Γ⁴₂₂
///   (d) −Γ³₂₁ + Γ⁴₂₂ = α
///   (e) Γ⁴₃₃ = −E₄′ ln α + α
std::array<double, 5> special_frame_relations(const Frame& special, const Christoffel<double>& gamma);

/// One sample for the predicate "E₃, E₄ annihilate P and Q, and dθ = 0,
/// imply f = g = 0 or dφ = 0".
struct AngleConstancySample {
  IntegrabilityPredicates predicates;
  double lee_derivative_norm = 0.0;
  double phi_gradient_norm = 0.0;  // ‖dφ‖ over frame components
};

AngleConstancySample angle_constancy_sample(const Frame& frame);

struct AngleConstancyVerdict {
  bool hypothesis = false;  // vertical derivatives ≤ 1e−9 and dθ = 0 everywhere
  bool conclusion = false;  // max(|f|, |g|) ≤ 1e−7 everywhere, or ‖dφ‖ ≤ 1e−7 everywhere
  [[nodiscard]] bool holds() const { return !hypothesis || conclusion; }
};

AngleConstancyVerdict angle_constancy(const std::vector<AngleConstancySample>& samples);

}  // namespace orthotoric
