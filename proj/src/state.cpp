#include "noontomo/state.hpp"

#include "noontomo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace noontomo {

namespace {

Matrix4c make_symmetry_to_product() {
  const double r = 1.0 / std::sqrt(2.0);
  Matrix4c b = Matrix4c::Zero();
  // columns: HH, psi+, VV, psi-; rows: HH, HV, VH, VV
  b(0, 0) = 1.0;
  b(1, 1) = r;
  b(2, 1) = r;
  b(3, 2) = 1.0;
  b(1, 3) = r;
  b(2, 3) = -r;
  return b;
}

}  // namespace

bool ValidationReport::block_structured() const {
  return std::all_of(block_coherence.begin(), block_coherence.end(),
                     [](double c) { return c <= tolerance::kBlock; });
}

const Matrix4c& symmetry_to_product() {
  static const Matrix4c b = make_symmetry_to_product();
  return b;
}

PolarizationDensityMatrix::PolarizationDensityMatrix() : entries_(Matrix4c::Identity() * 0.25) {}

PolarizationDensityMatrix PolarizationDensityMatrix::maximally_mixed() {
  return PolarizationDensityMatrix{};
}

PolarizationDensityMatrix PolarizationDensityMatrix::projector(const PurePairState& psi) {
  return PolarizationDensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

PolarizationDensityMatrix PolarizationDensityMatrix::diagonal(double hh, double psi_plus, double vv,
                                                              double psi_minus) {
  Matrix4c m = Matrix4c::Zero();
  m(sym::kHH, sym::kHH) = hh;
  m(sym::kPsiPlus, sym::kPsiPlus) = psi_plus;
  m(sym::kVV, sym::kVV) = vv;
  m(sym::kPsiMinus, sym::kPsiMinus) = psi_minus;
  return PolarizationDensityMatrix(m);
}

PurePairState::PurePairState(const Vector4c& amplitudes) : amplitudes_(amplitudes) {
  if (!amplitudes.allFinite() || std::abs(amplitudes.norm() - 1.0) > tolerance::kNorm) {
    throw InvalidStateError("pure pair state is not normalized (norm " +
                            std::to_string(amplitudes.norm()) + ")");
  }
}

PurePairState PurePairState::basis(int index) {
  if (index < 0 || index > 3) throw InvalidStateError("basis index out of range");
  Vector4c v = Vector4c::Zero();
  v(index) = 1.0;
  return PurePairState(v);
}

ValidationReport validate(const Matrix4c& rho) {
  ValidationReport r;
  if (!rho.allFinite()) {
    r.hermiticity_defect = r.trace_defect = std::numeric_limits<double>::infinity();
    r.min_eigenvalue = -std::numeric_limits<double>::infinity();
    r.block_coherence.fill(std::numeric_limits<double>::infinity());
    return r;
  }
  r.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  r.trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
  const Matrix4c herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> eig(herm, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = eig.eigenvalues().minCoeff();
  for (int i = 0; i < 3; ++i) {
    r.block_coherence[i] = std::max(std::abs(rho(i, sym::kPsiMinus)), std::abs(rho(sym::kPsiMinus, i)));
  }
  return r;
}

ValidationReport validate(const PolarizationDensityMatrix& rho) { return validate(rho.entries()); }

void require_physical(const PolarizationDensityMatrix& rho, const char* what) {
  const ValidationReport r = validate(rho);
  if (r.physical()) return;
  std::string msg = std::string(what) + ": invalid density matrix (";
  if (!r.hermitian()) msg += "hermiticity defect " + std::to_string(r.hermiticity_defect) + " ";
  if (!r.unit_trace()) msg += "trace defect " + std::to_string(r.trace_defect) + " ";
  if (!r.positive()) msg += "min eigenvalue " + std::to_string(r.min_eigenvalue) + " ";
  msg.back() = ')';
  throw InvalidStateError(msg);
}

PolarizationDensityMatrix to_symmetry_basis(const ProductBasisMatrix& m) {
  if (!validate(m.entries()).physical()) {
    throw InvalidStateError("to_symmetry_basis: product-basis matrix is not a valid density matrix");
  }
  const Matrix4c& b = symmetry_to_product();
  return PolarizationDensityMatrix(b.adjoint() * m.entries() * b);
}

ProductBasisMatrix to_product_basis(const PolarizationDensityMatrix& rho) {
  const Matrix4c& b = symmetry_to_product();
  return ProductBasisMatrix(b * rho.entries() * b.adjoint());
}

Vector4c to_symmetry_basis(const Vector4c& product_amplitudes) {
  return symmetry_to_product().adjoint() * product_amplitudes;
}

Vector4c to_product_basis(const Vector4c& symmetry_amplitudes) {
  return symmetry_to_product() * symmetry_amplitudes;
}

PolarizationDensityMatrix enforce_block_structure(const PolarizationDensityMatrix& rho) {
  Matrix4c m = rho.entries();
  for (int i = 0; i < 3; ++i) {
    m(i, sym::kPsiMinus) = 0.0;
    m(sym::kPsiMinus, i) = 0.0;
  }
  return PolarizationDensityMatrix(m);
}

PolarizationDensityMatrix make_distinguishable(const PolarizationDensityMatrix& rho) {
  Matrix4c m = rho.entries();
  const Complex mean = 0.5 * (m(sym::kPsiPlus, sym::kPsiPlus) + m(sym::kPsiMinus, sym::kPsiMinus));
  m(sym::kPsiPlus, sym::kPsiPlus) = mean;
  m(sym::kPsiMinus, sym::kPsiMinus) = mean;
  return PolarizationDensityMatrix(m);
}

Populations populations(const PolarizationDensityMatrix& rho) {
  require_physical(rho, "populations");
  const auto& m = rho.entries();
  return {m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real()};
}

double fidelity(const PolarizationDensityMatrix& rho, const PurePairState& psi) {
  const Vector4c& v = psi.amplitudes();
  return (v.adjoint() * rho.entries() * v)(0, 0).real();
}

PurePairState ideal_noon(double phi) {
  const double r = 1.0 / std::sqrt(2.0);
  Vector4c v = Vector4c::Zero();
  v(sym::kHH) = r;
  v(sym::kVV) = std::polar(r, phi);
  return PurePairState(v);
}

double trace_distance(const PolarizationDensityMatrix& a, const PolarizationDensityMatrix& b) {
  const Matrix4c d = a.entries() - b.entries();
  Eigen::SelfAdjointEigenSolver<Matrix4c> eig(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

}  // namespace noontomo
