#pragma once

// Coincidence-counting tomography: analyzer effects, informational
// completeness, count simulation with accidentals, and the fixtures for the
// four measured states.

#include "noontomo/state.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace noontomo {

/// Analyzer in front of the polarizing beam splitter: QWP1 then HWP.
/// An empty qwp_angle means the quarter-wave plate is removed.
struct WaveplateSetting {
  int setting_id = 0;
  std::optional<double> qwp_angle;  // radians
  double hwp_angle = 0.0;           // radians
};

/// Outcome order used for effects and counts: both photons in the
/// transmitted (alpha) port, alpha/beta, beta/alpha, both reflected (beta).
enum Outcome : int { kAlphaAlpha = 0, kAlphaBeta = 1, kBetaAlpha = 2, kBetaBeta = 3 };

/// Same-port pairs are only seen when the fiber splitter sends the photons to
/// different detectors.
inline constexpr std::array<double, 4> kDetectionEfficiency{0.5, 1.0, 1.0, 0.5};

using Effects = std::array<Matrix4c, 4>;

/// Four block-structured effects in the symmetry-ordered basis, summing to
/// the identity. Built by propagating the PBS projectors backward through the
/// lifted HWP and QWP.
Effects measurement_operators(const WaveplateSetting& setting);

/// Default ten-setting protocol, angles given as (QWP, HWP) in degrees:
/// (0,0) (0,22.5) (0,11.25) (45,0) (45,22.5) (45,11.25) (90,22.5)
/// (22.5,0) (22.5,22.5) (67.5,11.25).
std::vector<WaveplateSetting> default_settings();

struct CompletenessReport {
  /// Rank of the traceless parts of all effects; the state space has 9
  /// free real parameters (symmetric 3x3 block plus rho_44, minus trace).
  int rank = 0;
  int required = 9;
  std::vector<double> singular_values;
  bool passed() const { return rank >= required; }
};

CompletenessReport check_completeness(std::span<const WaveplateSetting> settings);

struct CountRecord {
  int setting_id = 0;
  /// (n_aa, n_ab, n_ba, n_bb). Integral for measured data; may be fractional
  /// after accidental subtraction or for expectation-valued data.
  std::array<double, 4> counts{};
  /// Counts before subtract_accidentals, when it has been applied.
  std::optional<std::array<double, 4>> raw_counts;
  double duration = 0.0;                 // s
  std::array<double, 2> singles_rates{};  // counts/s
  double window = 0.0;                   // s

  /// r1 r2 window duration, split evenly over the four outcomes.
  double expected_accidentals() const {
    return singles_rates[0] * singles_rates[1] * window * duration;
  }
};

struct TomographyDataset {
  std::vector<WaveplateSetting> settings;
  std::vector<CountRecord> records;

  /// Throws FormatError if the id is unknown.
  const WaveplateSetting& setting(int setting_id) const;
  /// Throws FormatError on unresolved ids, negative counts, non-positive
  /// durations or windows, or negative singles rates.
  void validate() const;
};

struct SimulationParams {
  double singles_rate = 1.0e4;  // counts/s on each side, after accidentals correction
  double duration = 60.0;       // s per setting
  double window = 150e-9;       // s
  double pair_rate = 135.0;     // detected pairs/s before the fiber-splitter factor
  std::uint64_t seed = 0;
};

/// Pair rate for which accidentals make up `fraction` of the out-of-dip
/// cross-port coincidences. Out of the dip the cross-port true rate is
/// pair_rate/2 and the accidental rate is r1 r2 window/2, so
/// pair_rate = r1 r2 window (1 - fraction)/fraction.
double pair_rate_for_accidental_fraction(double singles1, double singles2, double window,
                                         double fraction);

/// Mean counts per outcome:
///   pair_rate duration eta_k Tr[E_k rho] + r1 r2 window duration / 4
std::array<double, 4> expected_counts(const PolarizationDensityMatrix& rho, const WaveplateSetting& setting,
                                      const SimulationParams& params);

/// Poisson-sampled dataset, deterministic for a given seed.
TomographyDataset simulate_counts(const PolarizationDensityMatrix& rho,
                                  std::span<const WaveplateSetting> settings, const SimulationParams& params);

/// Noiseless dataset holding expected_counts() for every setting.
TomographyDataset expected_dataset(const PolarizationDensityMatrix& rho,
                                   std::span<const WaveplateSetting> settings, const SimulationParams& params);

/// Removes the expected accidentals, a quarter per outcome, clamping at zero.
/// Raw counts are kept in raw_counts. Throws FormatError when a record's
/// singles rates or window are missing (non-finite or negative).
TomographyDataset subtract_accidentals(const TomographyDataset& dataset);

/// Block-structured states with measured psi+/psi- populations: a at the
/// centre of the HOM dip, b at its edge, c outside it, d with a detuned pump.
///   a: (0.94, 0.04)  b: (0.68, 0.28)  c: (0.49, 0.50)  d: (0.66, 0.16)
/// a-c split the remaining population evenly between HH and VV. d puts 0.03
/// in HH, 0.15 in VV and a real psi+/VV coherence of 0.20. Only the
/// populations are measured values; the rest is illustrative.
/// Throws FormatError for any other id.
PolarizationDensityMatrix measured_fixture(char state_id);

}  // namespace noontomo
