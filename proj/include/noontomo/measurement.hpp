#pragma once

// Coincidence probabilities, HOM visibility and the temporal-delay model.

#include "noontomo/state.hpp"

#include <span>
#include <vector>

namespace noontomo {

/// Analyzer basis |alpha>, |beta> = (|H> +- e^{i phi}|V>)/sqrt(2).
struct AnalyzerSetting {
  double phi = 0.0;
};

enum class OverlapShape { kTriangular, kDoubleExponential };

/// Temporal overlap O(tau) of the H- and V-photon wave packets.
///   triangular:         O = max(0, 1 - |tau|/w)
///   double exponential: O = exp(-|tau|/w)
class DelayModel {
 public:
  /// Throws FormatError unless coherence_width > 0 and finite.
  DelayModel(double coherence_width, OverlapShape shape = OverlapShape::kTriangular);

  double coherence_width() const { return width_; }
  OverlapShape shape() const { return shape_; }
  double overlap(double tau) const;

 private:
  double width_;
  OverlapShape shape_;
};

struct HomCurve {
  std::vector<double> delays;
  std::vector<double> coincidence_probabilities;
  /// (C_out - C_min)/(C_out + C_min), the HOM-visibility convention.
  double visibility = 0.0;
  /// (C_out - C_min)/C_out, the dip-depth convention.
  double dip_depth = 0.0;
  double minimum = 0.0;
  /// Coincidence at the least-overlapping delay of the scan.
  double baseline = 0.0;
};

/// C = rho_44 + (rho_11 + rho_33)/2 - Re[e^{2i phi} rho_13]
double coincidence_probability(const PolarizationDensityMatrix& rho, AnalyzerSetting setting);

/// C_dist = 1/2 - Re[e^{2i phi} rho_13]
double coincidence_probability_distinguishable(const PolarizationDensityMatrix& rho,
                                               AnalyzerSetting setting);

/// (C_dist - C)/(C_dist + C). Throws UndefinedVisibilityError when the
/// denominator vanishes (only for a coherent NOON state matched to phi).
double hom_visibility(const PolarizationDensityMatrix& rho, AnalyzerSetting setting);

/// (rho_22 - rho_44)/(2 - (rho_22 - rho_44) - 4 Re[e^{2i phi} rho_13]),
/// algebraically equal to hom_visibility for unit-trace rho.
double hom_visibility_from_elements(const PolarizationDensityMatrix& rho, AnalyzerSetting setting);

/// (C_dist - C)/C_dist
double hom_dip_depth(const PolarizationDensityMatrix& rho, AnalyzerSetting setting);

/// (1 - rho_44)/(1 + rho_44), the largest visibility any collective rotation
/// of both photons can produce.
double interferometric_visibility_bound(const PolarizationDensityMatrix& rho);

/// Partial-distinguishability channel at relative delay tau. With O = overlap(tau):
///   rho_22' = (1+O)/2 rho_22 + (1-O)/2 rho_44
///   rho_44' = (1-O)/2 rho_22 + (1+O)/2 rho_44
///   rho_12', rho_23' scale by sqrt((1+O)/2)
///   rho_11, rho_33, rho_13 unchanged
/// See docs/delay_model.md for the isometry this comes from. Requires a
/// physical, block-structured rho.
PolarizationDensityMatrix apply_delay(const PolarizationDensityMatrix& rho, double tau,
                                      const DelayModel& model);

/// Same channel written directly in terms of the overlap value O in [0, 1].
PolarizationDensityMatrix apply_overlap(const PolarizationDensityMatrix& rho, double overlap);

/// Coincidence probability versus delay. Throws FormatError on an empty list.
HomCurve hom_scan(const PolarizationDensityMatrix& rho0, std::span<const double> delays,
                  const DelayModel& model, AnalyzerSetting setting);

}  // namespace noontomo
