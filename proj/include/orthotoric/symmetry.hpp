#pragma once

// Killing fields, Lie derivatives of tensor fields and the hyperkähler sphere
// of Kähler forms on the orthotoric families.
//
// Lie derivatives use the jets of ξ at the point (no flows):
//   (L_ξ g)_ab = ξᵏ∂_k g_ab + g_kb ∂_a ξᵏ + g_ak ∂_b ξᵏ      (same for 2-forms)
//   (L_ξ J)ᵃ_b = ξᵏ∂_k Jᵃ_b − Jᵏ_b ∂_k ξᵃ + Jᵃ_k ∂_b ξᵏ
//
// The Kähler forms of the triple are ω₁ = ω_J and, with ψ = c z + a t + ψ₀,
//   γ(ψ₀) = cos ψ (θ₁∧θ₂ − θ₃∧θ₄) + sin ψ (θ₂∧θ₃ − θ₁∧θ₄),
// ω₂ = γ(0), ω₃ = γ(π/2). All three are self-dual and parallel.

#include "orthotoric/hermitian.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace orthotoric {

/// A vector field to be tested for the Killing property.
struct KillingCandidate {
  std::string tag;
  std::function<VecJ(const VecJ&)> field;

  /// Components with exact first and second derivatives at p.
  [[nodiscard]] VecJ at(const Point& p) const { return field(seed(p.coords)); }
};

/// ∂_x, ∂_y, ∂_z or ∂_t (axis 0..3), tagged "d_x" etc.
KillingCandidate coordinate_field(int axis);

/// Σ cᵢ ξᵢ with a tag built from the terms.
KillingCandidate linear_combination(const std::vector<std::pair<double, KillingCandidate>>& terms);

/// L_ξ g on coordinates.
Eigen::Matrix4d lie_derivative_metric(const VecJ& xi, const MetricAtPoint& m);
/// L_ξ ω on coordinates for a 2-form given as jets.
Eigen::Matrix4d lie_derivative(const VecJ& xi, const MatJ& two_form);
/// L_ξ J on coordinates for an endomorphism field given as jets.
Eigen::Matrix4d lie_derivative_endomorphism(const VecJ& xi, const MatJ& endomorphism);

/// ‖L_ξ g‖ over the frame components at p.
double killing_residual(const KillingCandidate& xi, const MetricFamily& family, const Point& p);

/// ‖L_ξ J‖ over coordinate components; J must be evaluated at the same point.
double holomorphy_residual(const KillingCandidate& xi, const AlmostComplexStructure& J, const Point& p);

/// |div ξ|, the coefficient of L_ξ vol.
double volume_residual(const KillingCandidate& xi, const MetricFamily& family, const Point& p);

/// ‖[ξ, ζ]‖ at p.
double bracket_residual(const KillingCandidate& xi, const KillingCandidate& zeta, const Point& p);

/// Profiles of the frame's family in hyperkähler form, if they have it.
std::optional<HyperkahlerParams> hyperkahler_shape(const Frame& frame);

/// ψ = c z + a t + ψ₀ as a jet at the frame's point.
Jetd sphere_angle(const Frame& frame, double psi0, const HyperkahlerParams& hk);

/// γ(ψ₀) in coordinates; throws Error(kInvalidArgument) when the frame does
/// not carry hyperkähler profiles matching `hk`.
MatJ kahler_sphere(const Frame& frame, double psi0, const HyperkahlerParams& hk);

/// Complex structure with ω(X, Y) = g(JX, Y): J = −g⁻¹ω.
AlmostComplexStructure complex_structure_of(const Frame& frame, const MatJ& two_form);

/// ω₁, ω₂, ω₃ at one point.
struct HyperkahlerTriple {
  Frame frame;
  std::array<MatJ, 3> omega;

  /// max_{i≠j} |ωᵢ∧ωⱼ| / vol.
  [[nodiscard]] double wedge_orthogonality() const;
  /// max_i |ωᵢ∧ωᵢ − 2 vol| / vol.
  [[nodiscard]] double volume_normalization() const;
  /// Frame components of each ωᵢ.
  [[nodiscard]] std::array<Eigen::Matrix4d, 3> frame_components() const;
};

HyperkahlerTriple hyperkahler_triple(const Frame& frame, const HyperkahlerParams& hk);

/// ‖∇ω‖ over frame components with the Levi-Civita connection of `family`.
double parallel_residual(const MetricFamily& family, const Frame& frame, const MatJ& two_form);

/// 64 points: the centers of a 4×4×2×2 lattice of cells covering `box`.
std::vector<Point> fit_grid(const Rectangle& box);

struct PhiFit {
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();  // L_ξ ωᵢ = Σ_j A(i, j) ω_j
  double fit_residual = 0.0;                    // max pointwise ‖L_ξ ωᵢ − Σ A(i, j) ω_j‖
  double antisymmetry = 0.0;                    // ‖A + Aᵀ‖
  double diagonal = 0.0;                        // max |A(i, i)|
  double killing = 0.0;                         // max killing residual over the grid
};

/// Least-squares fit of Φ(ξ) over `grid` for the hyperkähler family `family`.
/// Throws Error(kInvalidArgument) when ξ is not Killing (residual > 1e−7) or
/// the fit residual exceeds 1e−4.
PhiFit phi_homomorphism(const KillingCandidate& xi, const MetricFamily& family, const HyperkahlerParams& hk,
                        const std::vector<Point>& grid);

/// Unit vector of ker A for antisymmetric A; (1, 0, 0) when A vanishes.
Eigen::Vector3d find_holomorphic_structure(const Eigen::Matrix3d& A);

/// max over the grid of ‖L_ξ(Σ αᵢωᵢ)‖ and ‖L_ξ(Σ αᵢJᵢ)‖.
double structure_lie_residual(const KillingCandidate& xi, const Eigen::Vector3d& alpha, const MetricFamily& family,
                              const HyperkahlerParams& hk, const std::vector<Point>& grid);

struct TriholomorphicResult {
  bool found = false;
  /// Coefficients of the combination over the input fields, unit norm, with
  /// the first nonzero entry positive.
  std::vector<double> coefficients;
  std::string tag;
  std::vector<PhiFit> fits;
  /// max over forms and grid of ‖L_ξ ωᵢ‖ for the combination.
  double lie_residual = 0.0;
  double bracket = 0.0;
};

/// Searches span(fields) for a field with Φ = 0. Needs at least two fields
/// whose brackets vanish within 1e−8, otherwise throws Error(kInvalidArgument);
/// a single field is accepted and reported found iff Φ vanishes.
TriholomorphicResult triholomorphic_scan(const std::vector<KillingCandidate>& fields, const MetricFamily& family,
                                         const HyperkahlerParams& hk, const std::vector<Point>& grid);

}  // namespace orthotoric
