#pragma once

// Jones calculus for lossless wave plates and its lift to photon pairs.
//
// Conventions (used everywhere in the library):
//   * Jones vectors are (H, V) amplitudes.
//   * Angles are the fast-axis angle from horizontal, in radians.
//   * hwp(t) = [[cos 2t, sin 2t], [sin 2t, -cos 2t]]  (det = -1)
//   * qwp(t) = e^{-i pi/4} [[cos^2 t + i sin^2 t, (1-i) sin t cos t],
//                           [(1-i) sin t cos t,   sin^2 t + i cos^2 t]]
//     so qwp(0) = e^{-i pi/4} diag(1, i).
// Identities that depend on global phase are checked at the density-matrix
// level, where the phase cancels.

#include "noontomo/state.hpp"

namespace noontomo {

class JonesMatrix {
 public:
  /// Throws InvalidStateError unless U^dagger U = I within 1e-12.
  explicit JonesMatrix(const Matrix2c& entries);

  static JonesMatrix identity() { return JonesMatrix(Matrix2c::Identity()); }

  const Matrix2c& entries() const { return entries_; }

  /// Composition: (a * b) applies b first.
  friend JonesMatrix operator*(const JonesMatrix& a, const JonesMatrix& b) {
    return JonesMatrix(a.entries_ * b.entries_);
  }

 private:
  Matrix2c entries_;
};

/// U (x) U expressed in the symmetry-ordered basis. Block diagonal: the
/// singlet only picks up the phase det(U).
class TwoPhotonUnitary {
 public:
  /// Throws InvalidStateError if not unitary or not block diagonal.
  explicit TwoPhotonUnitary(const Matrix4c& entries);

  static TwoPhotonUnitary identity() { return TwoPhotonUnitary(Matrix4c::Identity()); }

  const Matrix4c& entries() const { return entries_; }
  TwoPhotonUnitary inverse() const { return TwoPhotonUnitary(entries_.adjoint()); }

  friend TwoPhotonUnitary operator*(const TwoPhotonUnitary& a, const TwoPhotonUnitary& b) {
    return TwoPhotonUnitary(a.entries_ * b.entries_);
  }

 private:
  Matrix4c entries_;
};

JonesMatrix hwp(double theta);
JonesMatrix qwp(double theta);

TwoPhotonUnitary lift(const JonesMatrix& u);

/// U rho U^dagger. Throws InvalidStateError if rho is not physical.
PolarizationDensityMatrix apply(const PolarizationDensityMatrix& rho, const TwoPhotonUnitary& u);
/// U |psi>
PurePairState apply(const PurePairState& psi, const TwoPhotonUnitary& u);

/// The cavity output |H1 V2> symmetrized (= |psi+>, a NOON state in the
/// circular basis) sent through a quarter-wave plate at 45 degrees. With the
/// conventions above the result is -i (|HH> + |VV>)/sqrt(2), i.e. the H/V
/// NOON state with phi0 = 0 up to a global phase.
PurePairState hv_noon_from_cavity();

/// Phase phi0 of the NOON state produced by hv_noon_from_cavity().
inline constexpr double kCavityNoonPhase = 0.0;

}  // namespace noontomo
