#pragma once

#include "noontomo/state.hpp"

#include <string>
#include <vector>

namespace noontomo {

/// Phase between HH and VV of the measured NOON state.
inline constexpr double kMeasuredNoonPhase = 0.20;
inline constexpr double kMeasuredNoonFidelity = 0.99;

/// F |N(phi)><N(phi)| + (1-F)/2 (|psi+><psi+| + |psi-><psi-|). The admixture
/// has no overlap with any NOON state, so noon_fidelity returns exactly
/// (F, phi).
PolarizationDensityMatrix noon_fixture(double phi, double fidelity);

/// Named states accepted by the CLI:
///   psi-plus, psi-minus, hh, vv, mixed, noon (ideal, phase `phi`),
///   noon-ideal (ideal, phase 0.20), noon-99 (noon_fixture(0.20, 0.99)),
///   cavity-noon (hv_noon_from_cavity), fixture-a .. fixture-d.
/// Throws FormatError for unknown names.
PolarizationDensityMatrix named_state(const std::string& name, double phi = 0.0);

std::vector<std::string> named_state_names();

}  // namespace noontomo
