#pragma once

// NOON-state figures of merit and the half-wave-plate fringe experiment.

#include "noontomo/state.hpp"

#include <span>
#include <vector>

namespace noontomo {

struct NoonFidelity {
  double fidelity = 0.0;
  double phi = 0.0;
};

/// max over phi of <N(phi)|rho|N(phi)>, attained at phi = arg(rho_31) with
/// value (rho_11 + rho_33)/2 + |rho_13|. phi is 0 when rho_13 vanishes.
NoonFidelity noon_fidelity(const PolarizationDensityMatrix& rho);

/// Fit of y = offset (1 + visibility cos(2 pi x / period + phase)).
struct SinusoidFit {
  double visibility = 0.0;  // (max - min)/(max + min) of the fitted curve, clamped to [0, 1]
  double period = 0.0;      // same units as x; NaN when not identifiable
  double phase = 0.0;       // radians, in (-pi, pi]
  double offset = 0.0;
  double residual_norm = 0.0;
  bool period_identified = true;
  bool converged = true;
};

/// Least-squares sinusoid fit. The frequency is seeded from the peak of the
/// least-squares periodogram on a grid, then all four parameters are refined
/// with Levenberg-Marquardt. Constant data gives visibility 0 and
/// period_identified = false. Throws FormatError for fewer than 8 points,
/// mismatched lengths, or negative y.
SinusoidFit fit_sinusoid(std::span<const double> xs, std::span<const double> ys);

enum class FringeMode {
  /// The state is sent straight into the HWP (the circular-basis NOON state
  /// |psi+> gives super-resolved fringes).
  kCircular,
  /// A QWP at 45 degrees first maps an H/V NOON state back to the circular basis.
  kHv,
};

struct FringeScan {
  std::vector<double> angles;  // HWP angle, radians
  /// Transmission of a lone H photon through the HWP and PBS.
  std::vector<double> singles;
  /// Probability of one photon in each PBS output port.
  std::vector<double> coincidences;
  SinusoidFit singles_fit;
  SinusoidFit coincidence_fit;
  /// (max - min)/(max + min) of the simulated coincidence values.
  double coincidence_contrast = 0.0;

  double period_ratio() const { return singles_fit.period / coincidence_fit.period; }
};

/// Throws FormatError for fewer than 8 angles, InvalidStateError for an
/// unphysical rho.
FringeScan fringe_scan(const PolarizationDensityMatrix& rho, std::span<const double> angles,
                       FringeMode mode = FringeMode::kCircular);

}  // namespace noontomo
