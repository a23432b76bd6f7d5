#include "noontomo/optics.hpp"

#include "noontomo/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <numbers>
#include <string>

namespace noontomo {

namespace {

double unitarity_defect(const auto& m) {
  using M = std::decay_t<decltype(m)>;
  return (m.adjoint() * m - M::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace

JonesMatrix::JonesMatrix(const Matrix2c& entries) : entries_(entries) {
  if (!entries.allFinite() || unitarity_defect(entries) > tolerance::kUnitary) {
    throw InvalidStateError("Jones matrix is not unitary");
  }
}

TwoPhotonUnitary::TwoPhotonUnitary(const Matrix4c& entries) : entries_(entries) {
  if (!entries.allFinite() || unitarity_defect(entries) > tolerance::kUnitary) {
    throw InvalidStateError("two-photon operator is not unitary");
  }
  for (int i = 0; i < 3; ++i) {
    if (std::abs(entries(i, sym::kPsiMinus)) > tolerance::kBlock ||
        std::abs(entries(sym::kPsiMinus, i)) > tolerance::kBlock) {
      throw InvalidStateError("two-photon operator couples the singlet to the triplet");
    }
  }
}

JonesMatrix hwp(double theta) {
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  Matrix2c m;
  m << c, s, s, -c;
  return JonesMatrix(m);
}

JonesMatrix qwp(double theta) {
  const Complex i(0.0, 1.0);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex phase = std::polar(1.0, -std::numbers::pi / 4.0);
  Matrix2c m;
  m << c * c + i * s * s, (1.0 - i) * s * c,
       (1.0 - i) * s * c, s * s + i * c * c;
  return JonesMatrix(phase * m);
}

TwoPhotonUnitary lift(const JonesMatrix& u) {
  const Matrix4c product = Eigen::kroneckerProduct(u.entries(), u.entries()).eval();
  const Matrix4c& b = symmetry_to_product();
  Matrix4c m = b.adjoint() * product * b;
  // The off-block entries are zero analytically; remove round-off.
  for (int i = 0; i < 3; ++i) {
    if (std::abs(m(i, sym::kPsiMinus)) > 1e-13 || std::abs(m(sym::kPsiMinus, i)) > 1e-13) {
      throw InvalidStateError("lift: singlet coupling " + std::to_string(std::abs(m(i, sym::kPsiMinus))));
    }
    m(i, sym::kPsiMinus) = 0.0;
    m(sym::kPsiMinus, i) = 0.0;
  }
  return TwoPhotonUnitary(m);
}

PolarizationDensityMatrix apply(const PolarizationDensityMatrix& rho, const TwoPhotonUnitary& u) {
  require_physical(rho, "apply");
  return PolarizationDensityMatrix(u.entries() * rho.entries() * u.entries().adjoint());
}

PurePairState apply(const PurePairState& psi, const TwoPhotonUnitary& u) {
  Vector4c out = u.entries() * psi.amplitudes();
  return PurePairState(out / out.norm());
}

PurePairState hv_noon_from_cavity() {
  const PurePairState cavity = PurePairState::basis(sym::kPsiPlus);
  return apply(cavity, lift(qwp(std::numbers::pi / 4.0)));
}

}  // namespace noontomo
