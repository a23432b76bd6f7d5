#pragma once

// Two-photon polarization states.
//
// Symmetry-ordered basis, 0-based internally:
//
//   index 0  |HH>      (documented as 1, i.e. rho_11)
//   index 1  |psi+>    (rho_22)
//   index 2  |VV>      (rho_33)
//   index 3  |psi->    (rho_44)
//
// with |psi+-> = (|H1 V2> +- |V1 H2>)/sqrt(2). Documentation and reports use
// the 1-based names (rho_44 is entries()(3, 3)).
//
// Product basis ordering is (HH, HV, VH, VV), photon 1 first.

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace noontomo {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Vector4cd;

namespace sym {
inline constexpr int kHH = 0;
inline constexpr int kPsiPlus = 1;
inline constexpr int kVV = 2;
inline constexpr int kPsiMinus = 3;
}  // namespace sym

namespace tolerance {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kMinEigenvalue = -1e-10;
inline constexpr double kNorm = 1e-12;
inline constexpr double kUnitary = 1e-12;
inline constexpr double kBlock = 1e-12;
}  // namespace tolerance

struct ValidationReport {
  double hermiticity_defect = 0.0;  // max |rho - rho^dagger|
  double trace_defect = 0.0;        // |Tr rho - 1|
  double min_eigenvalue = 0.0;
  /// |rho_14|, |rho_24|, |rho_34|
  std::array<double, 3> block_coherence{};

  bool hermitian() const { return hermiticity_defect <= tolerance::kHermitian; }
  bool unit_trace() const { return trace_defect <= tolerance::kTrace; }
  bool positive() const { return min_eigenvalue >= tolerance::kMinEigenvalue; }
  bool block_structured() const;
  /// Hermitian, unit trace and PSD. This is what operations require of
  /// their inputs.
  bool physical() const { return hermitian() && unit_trace() && positive(); }
  /// All invariants including the singlet/triplet block structure.
  bool passed() const { return physical() && block_structured(); }
};

class PurePairState;

/// 4x4 density matrix in the symmetry-ordered basis. Holds whatever matrix it
/// is given; use validate() or require_physical() to check invariants.
class PolarizationDensityMatrix {
 public:
  PolarizationDensityMatrix();  // identity / 4
  explicit PolarizationDensityMatrix(const Matrix4c& entries) : entries_(entries) {}

  static PolarizationDensityMatrix maximally_mixed();
  static PolarizationDensityMatrix projector(const PurePairState& psi);
  /// Diagonal state with the given (HH, psi+, VV, psi-) populations.
  static PolarizationDensityMatrix diagonal(double hh, double psi_plus, double vv, double psi_minus);

  const Matrix4c& entries() const { return entries_; }
  /// 0-based element access.
  Complex operator()(int row, int col) const { return entries_(row, col); }

 private:
  Matrix4c entries_;
};

class PurePairState {
 public:
  /// Throws InvalidStateError unless |amplitudes| = 1 within 1e-12.
  explicit PurePairState(const Vector4c& amplitudes);

  static PurePairState basis(int index);

  const Vector4c& amplitudes() const { return amplitudes_; }

 private:
  Vector4c amplitudes_;
};

/// Density matrix in the product basis (HH, HV, VH, VV).
class ProductBasisMatrix {
 public:
  explicit ProductBasisMatrix(const Matrix4c& entries) : entries_(entries) {}
  const Matrix4c& entries() const { return entries_; }

 private:
  Matrix4c entries_;
};

/// Columns are the symmetry-ordered basis vectors written in the product basis.
const Matrix4c& symmetry_to_product();

ValidationReport validate(const Matrix4c& rho);
ValidationReport validate(const PolarizationDensityMatrix& rho);

/// Throws InvalidStateError naming the failed invariant.
void require_physical(const PolarizationDensityMatrix& rho, const char* what);

PolarizationDensityMatrix to_symmetry_basis(const ProductBasisMatrix& m);
ProductBasisMatrix to_product_basis(const PolarizationDensityMatrix& rho);
Vector4c to_symmetry_basis(const Vector4c& product_amplitudes);
Vector4c to_product_basis(const Vector4c& symmetry_amplitudes);

/// Zeroes the unobservable singlet/triplet coherences rho_14, rho_24, rho_34.
PolarizationDensityMatrix enforce_block_structure(const PolarizationDensityMatrix& rho);

/// Replaces rho_22 and rho_44 by their mean. This is the formal
/// "complete distinguishability" substitution; it does not touch rho_12 or
/// rho_23, so the output need not be PSD when those coherences are large.
PolarizationDensityMatrix make_distinguishable(const PolarizationDensityMatrix& rho);

struct Populations {
  double hh = 0.0;
  double psi_plus = 0.0;
  double vv = 0.0;
  double psi_minus = 0.0;
};

Populations populations(const PolarizationDensityMatrix& rho);

/// <psi|rho|psi>
double fidelity(const PolarizationDensityMatrix& rho, const PurePairState& psi);

/// (|HH> + e^{i phi}|VV>)/sqrt(2)
PurePairState ideal_noon(double phi);

/// (1/2) sum |eig(a - b)|
double trace_distance(const PolarizationDensityMatrix& a, const PolarizationDensityMatrix& b);

}  // namespace noontomo
