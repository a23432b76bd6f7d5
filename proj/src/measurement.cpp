#include "noontomo/measurement.hpp"

#include "noontomo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace noontomo {

namespace {

// Re[e^{2 i phi} rho_13]
double noon_coherence_term(const PolarizationDensityMatrix& rho, double phi) {
  return (std::polar(1.0, 2.0 * phi) * rho(sym::kHH, sym::kVV)).real();
}

void require_block_structured(const PolarizationDensityMatrix& rho, const char* what) {
  require_physical(rho, what);
  if (!validate(rho).block_structured()) {
    throw InvalidStateError(std::string(what) + ": density matrix has singlet/triplet coherences");
  }
}

}  // namespace

DelayModel::DelayModel(double coherence_width, OverlapShape shape)
    : width_(coherence_width), shape_(shape) {
  if (!(coherence_width > 0.0) || !std::isfinite(coherence_width)) {
    throw FormatError("coherence width must be positive and finite");
  }
}

double DelayModel::overlap(double tau) const {
  const double x = std::abs(tau) / width_;
  switch (shape_) {
    case OverlapShape::kTriangular:
      return std::max(0.0, 1.0 - x);
    case OverlapShape::kDoubleExponential:
      return std::exp(-x);
  }
  return 0.0;
}

double coincidence_probability(const PolarizationDensityMatrix& rho, AnalyzerSetting setting) {
  require_physical(rho, "coincidence_probability");
  const auto& m = rho.entries();
  return m(sym::kPsiMinus, sym::kPsiMinus).real() +
         0.5 * (m(sym::kHH, sym::kHH).real() + m(sym::kVV, sym::kVV).real()) -
         noon_coherence_term(rho, setting.phi);
}

double coincidence_probability_distinguishable(const PolarizationDensityMatrix& rho,
                                               AnalyzerSetting setting) {
  require_physical(rho, "coincidence_probability_distinguishable");
  return 0.5 - noon_coherence_term(rho, setting.phi);
}

double hom_visibility(const PolarizationDensityMatrix& rho, AnalyzerSetting setting) {
  const double c = coincidence_probability(rho, setting);
  const double c_dist = coincidence_probability_distinguishable(rho, setting);
  const double denominator = c_dist + c;
  if (std::abs(denominator) < 1e-14) {
    throw UndefinedVisibilityError("HOM visibility undefined: C_dist + C = 0");
  }
  return (c_dist - c) / denominator;
}

double hom_visibility_from_elements(const PolarizationDensityMatrix& rho, AnalyzerSetting setting) {
  require_physical(rho, "hom_visibility_from_elements");
  const double d = rho(sym::kPsiPlus, sym::kPsiPlus).real() - rho(sym::kPsiMinus, sym::kPsiMinus).real();
  const double denominator = 2.0 - d - 4.0 * noon_coherence_term(rho, setting.phi);
  if (std::abs(denominator) < 2e-14) {
    throw UndefinedVisibilityError("HOM visibility undefined: vanishing denominator");
  }
  return d / denominator;
}

double hom_dip_depth(const PolarizationDensityMatrix& rho, AnalyzerSetting setting) {
  const double c = coincidence_probability(rho, setting);
  const double c_dist = coincidence_probability_distinguishable(rho, setting);
  if (std::abs(c_dist) < 1e-14) {
    throw UndefinedVisibilityError("HOM dip depth undefined: C_dist = 0");
  }
  return (c_dist - c) / c_dist;
}

double interferometric_visibility_bound(const PolarizationDensityMatrix& rho) {
  require_physical(rho, "interferometric_visibility_bound");
  const double singlet = rho(sym::kPsiMinus, sym::kPsiMinus).real();
  return (1.0 - singlet) / (1.0 + singlet);
}

PolarizationDensityMatrix apply_overlap(const PolarizationDensityMatrix& rho, double overlap) {
  require_block_structured(rho, "apply_delay");
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw FormatError("overlap must lie in [0, 1]");

  const double keep = 0.5 * (1.0 + overlap);
  const double swap = 0.5 * (1.0 - overlap);
  const double coherence = std::sqrt(keep);

  Matrix4c m = rho.entries();
  const Complex p_plus = m(sym::kPsiPlus, sym::kPsiPlus);
  const Complex p_minus = m(sym::kPsiMinus, sym::kPsiMinus);
  m(sym::kPsiPlus, sym::kPsiPlus) = keep * p_plus + swap * p_minus;
  m(sym::kPsiMinus, sym::kPsiMinus) = swap * p_plus + keep * p_minus;
  for (int other : {sym::kHH, sym::kVV}) {
    m(other, sym::kPsiPlus) *= coherence;
    m(sym::kPsiPlus, other) *= coherence;
  }
  return PolarizationDensityMatrix(m);
}

PolarizationDensityMatrix apply_delay(const PolarizationDensityMatrix& rho, double tau,
                                      const DelayModel& model) {
  return apply_overlap(rho, model.overlap(tau));
}

HomCurve hom_scan(const PolarizationDensityMatrix& rho0, std::span<const double> delays,
                  const DelayModel& model, AnalyzerSetting setting) {
  if (delays.empty()) throw FormatError("hom_scan: empty delay list");
  require_block_structured(rho0, "hom_scan");

  HomCurve curve;
  curve.delays.assign(delays.begin(), delays.end());
  curve.coincidence_probabilities.reserve(delays.size());
  std::size_t least_overlap = 0;
  for (std::size_t i = 0; i < delays.size(); ++i) {
    curve.coincidence_probabilities.push_back(
        coincidence_probability(apply_delay(rho0, delays[i], model), setting));
    if (model.overlap(delays[i]) < model.overlap(delays[least_overlap])) least_overlap = i;
  }

  const auto& c = curve.coincidence_probabilities;
  curve.minimum = *std::min_element(c.begin(), c.end());
  curve.baseline = c[least_overlap];
  const double sum = curve.baseline + curve.minimum;
  curve.visibility = sum > 0.0 ? (curve.baseline - curve.minimum) / sum : 0.0;
  curve.dip_depth = curve.baseline > 0.0 ? (curve.baseline - curve.minimum) / curve.baseline : 0.0;
  return curve;
}

}  // namespace noontomo
