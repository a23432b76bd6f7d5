#pragma once

// Maximum-likelihood reconstruction of block-structured two-photon states.
//
// The unnormalized state is X = s T^dagger T with T block diagonal: a general
// complex 3x3 symmetric block plus a real singlet entry, 19 real parameters. The expected count for outcome k of a record is
//
//   mu_k = duration * eta_k * Tr[E_k X] + b_k
//
// where eta_k is the fiber-splitter factor and b_k the accidental background
// (a quarter of r1 r2 window duration, or zero when the counts were already
// background-subtracted). Tr X is the pair rate, so the flux is fitted
// jointly with the state. Counts are independent Poisson variables.

#include "noontomo/state.hpp"
#include "noontomo/tomography.hpp"

#include <cstdint>
#include <vector>

namespace noontomo {

enum class AccidentalsMode {
  /// Accidentals enter the likelihood as a known additive Poisson mean.
  kBackground,
  /// Counts are used as-is with no background term (for data that has been
  /// through subtract_accidentals).
  kSubtracted,
};

struct MleOptions {
  /// Number of optimizer starts. The first start is the maximally mixed
  /// state; the others are random full-rank factors drawn from `seed`.
  int starts = 1;
  int max_iterations = 500;
  /// Stopping tolerance on the gradient of the count-normalized negative
  /// log-likelihood with respect to the factor parameters.
  double gradient_tolerance = 1e-8;
  AccidentalsMode accidentals = AccidentalsMode::kBackground;
  std::uint64_t seed = 0x5eed;
};

struct MleDiagnostics {
  /// sum_k n_k log mu_k - mu_k at the estimate (no log n! constant).
  double log_likelihood = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  int settings_rank = 0;
  /// Tr X, pairs/s before the fiber-splitter factor.
  double pair_rate = 0.0;
  int starts = 0;
  /// Largest trace distance between the best estimate and any other start.
  double start_spread = 0.0;
  std::vector<double> start_log_likelihoods;
};

struct MleResult {
  PolarizationDensityMatrix rho;
  MleDiagnostics diagnostics;
};

/// Throws IncompleteSettingsError if the settings used by the records fail
/// check_completeness, FormatError on an invalid dataset. Non-convergence is
/// reported through diagnostics.converged, never thrown.
MleResult mle_reconstruct(const TomographyDataset& dataset, const MleOptions& options = {});

/// Log-likelihood of the dataset for a given state and pair rate, same
/// convention as MleDiagnostics::log_likelihood.
double log_likelihood(const TomographyDataset& dataset, const PolarizationDensityMatrix& rho,
                      double pair_rate, AccidentalsMode mode = AccidentalsMode::kBackground);

}  // namespace noontomo
