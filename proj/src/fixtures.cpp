#include "noontomo/fixtures.hpp"

#include "noontomo/errors.hpp"
#include "noontomo/optics.hpp"
#include "noontomo/tomography.hpp"

namespace noontomo {

PolarizationDensityMatrix noon_fixture(double phi, double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw FormatError("fidelity must lie in [0, 1]");
  const Matrix4c noon = PolarizationDensityMatrix::projector(ideal_noon(phi)).entries();
  const Matrix4c rest = PolarizationDensityMatrix::diagonal(0.0, 0.5, 0.0, 0.5).entries();
  return PolarizationDensityMatrix(fidelity * noon + (1.0 - fidelity) * rest);
}

PolarizationDensityMatrix named_state(const std::string& name, double phi) {
  if (name == "psi-plus") return PolarizationDensityMatrix::projector(PurePairState::basis(sym::kPsiPlus));
  if (name == "psi-minus") return PolarizationDensityMatrix::projector(PurePairState::basis(sym::kPsiMinus));
  if (name == "hh") return PolarizationDensityMatrix::projector(PurePairState::basis(sym::kHH));
  if (name == "vv") return PolarizationDensityMatrix::projector(PurePairState::basis(sym::kVV));
  if (name == "mixed") return PolarizationDensityMatrix::maximally_mixed();
  if (name == "noon") return PolarizationDensityMatrix::projector(ideal_noon(phi));
  if (name == "noon-ideal") return PolarizationDensityMatrix::projector(ideal_noon(kMeasuredNoonPhase));
  if (name == "noon-99") return noon_fixture(kMeasuredNoonPhase, kMeasuredNoonFidelity);
  if (name == "cavity-noon") return PolarizationDensityMatrix::projector(hv_noon_from_cavity());
  if (name.size() == 9 && name.starts_with("fixture-")) return measured_fixture(name.back());
  throw FormatError("unknown state '" + name + "'");
}

std::vector<std::string> named_state_names() {
  return {"psi-plus", "psi-minus", "hh", "vv", "mixed", "noon", "noon-ideal", "noon-99", "cavity-noon",
          "fixture-a", "fixture-b", "fixture-c", "fixture-d"};
}

}  // namespace noontomo
