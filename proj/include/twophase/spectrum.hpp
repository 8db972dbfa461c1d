#pragma once

#include <array>
#include <complex>

#include "twophase/model.hpp"

namespace twophase {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;
using CVec3 = std::array<std::complex<double>, 3>;

/// Linearisation of the stationary first-order system about the far field,
/// in the deviation coordinates (u - u+, u_x, v - u+).
struct FarFieldJacobian {
  Mat3 entries{};
  /// Mach classification of the far field this matrix was assembled from.
  RegimeLabel regime{Regime::Sonic, 1.0};

  double trace() const noexcept;
  double determinant() const noexcept;
  /// Sum of the principal 2x2 minors (second characteristic coefficient).
  double second_invariant() const noexcept;
};

FarFieldJacobian assemble_jacobian(const ModelParams& params, const FarFieldData& far);

/// Builds a Jacobian-like matrix with an explicit regime label (used by tests
/// and for forced-regime runs).
FarFieldJacobian make_jacobian(const Mat3& entries, RegimeLabel regime);

struct InvariantResiduals {
  double sum = 0.0;       ///< |sum(lambda) - trace| / max(1, |trace|)
  double product = 0.0;   ///< |prod(lambda) - det| / max(1, |det|)
  double pairwise = 0.0;  ///< |sum lambda_i lambda_j - c2| / max(1, |c2|)
};

/// The three printed symmetric-function relations evaluated verbatim. The
/// printed form uses rho+^alpha where the assembled matrix has n+^alpha; the
/// gaps against det/trace/c2 record the difference.
struct PrintedRelationCheck {
  double product = 0.0, sum = 0.0, pairwise = 0.0;
  double product_gap = 0.0, sum_gap = 0.0, pairwise_gap = 0.0;
};

struct SpectrumReport {
  /// Eigenvalues in the regime labelling (lambda1, lambda2, lambda3):
  ///   supersonic: Re l1 > 0, Re l2 > 0, l3 < 0
  ///   subsonic:   Re l1 < 0, Re l2 < 0, l3 > 0
  ///   sonic:      l1 > 0, l2 < 0, l3 = 0
  CVec3 lambda{};
  /// Same eigenvalues ordered by descending real part.
  CVec3 descending{};
  /// Right eigenvectors r_i = (1, lambda_i, -(mu/n+)(lambda_i^2 - J22 lambda_i - n+/mu)).
  std::array<CVec3, 3> right{};
  /// Left eigenvectors, normalised so left[i] . right[j] = delta_ij.
  std::array<CVec3, 3> left{};
  RegimeLabel regime{Regime::Sonic, 1.0};
  double trace = 0.0, determinant = 0.0, second_invariant = 0.0;
  InvariantResiduals residuals{};
  PrintedRelationCheck printed{};

  /// Indices (into lambda) of eigenvalues with negative real part.
  std::array<int, 3> stable_indices(int& count) const;
  /// Smallest |Re lambda| over the stable eigenvalues.
  double slowest_stable_rate() const;
  double fastest_stable_rate() const;
};

/// Roots of x^3 + a x^2 + b x + c = 0 by the trigonometric / Cardano formulas,
/// each polished with complex Newton iterations on the cubic.
CVec3 cubic_roots(double a, double b, double c);

/// Eigen-decomposition and regime labelling of J. Throws StructuralError when
/// the sign pattern contradicts J.regime.
SpectrumReport eigen_spectrum(const FarFieldJacobian& J);

/// eigen_spectrum(assemble_jacobian(...)) plus the verbatim printed relations.
SpectrumReport eigen_spectrum(const ModelParams& params, const FarFieldData& far);

}  // namespace twophase
