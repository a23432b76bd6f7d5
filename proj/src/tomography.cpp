#include "noontomo/tomography.hpp"

#include "noontomo/errors.hpp"
#include "noontomo/optics.hpp"
#include "noontomo/units.hpp"

#include <cmath>
#include <random>
#include <string>

namespace noontomo {

namespace {

// PBS projectors in the symmetry-ordered basis: both transmitted (HH), both
// reflected (VV), and the two cross-port outcomes. The cross-port projector
// psi+ + psi- is split evenly because only its block-structured part is
// observable.
Effects pbs_effects() {
  Effects e;
  for (auto& m : e) m.setZero();
  e[kAlphaAlpha](sym::kHH, sym::kHH) = 1.0;
  e[kBetaBeta](sym::kVV, sym::kVV) = 1.0;
  for (int k : {kAlphaBeta, kBetaAlpha}) {
    e[k](sym::kPsiPlus, sym::kPsiPlus) = 0.5;
    e[k](sym::kPsiMinus, sym::kPsiMinus) = 0.5;
  }
  return e;
}

// Real coordinates of a block-structured Hermitian matrix: 9 for the
// symmetric block (orthonormal w.r.t. the Hilbert-Schmidt product) and rho_44.
Eigen::Matrix<double, 10, 1> hermitian_coordinates(const Matrix4c& m) {
  Eigen::Matrix<double, 10, 1> v;
  const double r2 = std::sqrt(2.0);
  v << m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), r2 * m(1, 0).real(), r2 * m(1, 0).imag(),
      r2 * m(2, 0).real(), r2 * m(2, 0).imag(), r2 * m(2, 1).real(), r2 * m(2, 1).imag(), m(3, 3).real();
  return v;
}

}  // namespace

Effects measurement_operators(const WaveplateSetting& setting) {
  JonesMatrix analyzer = hwp(setting.hwp_angle);
  if (setting.qwp_angle) analyzer = analyzer * qwp(*setting.qwp_angle);
  const Matrix4c u = lift(analyzer).entries();
  Effects effects = pbs_effects();
  for (auto& e : effects) e = u.adjoint() * e * u;
  return effects;
}

std::vector<WaveplateSetting> default_settings() {
  constexpr std::array<std::array<double, 2>, 10> angles{{{0.0, 0.0},
                                                          {0.0, 22.5},
                                                          {0.0, 11.25},
                                                          {45.0, 0.0},
                                                          {45.0, 22.5},
                                                          {45.0, 11.25},
                                                          {90.0, 22.5},
                                                          {22.5, 0.0},
                                                          {22.5, 22.5},
                                                          {67.5, 11.25}}};
  std::vector<WaveplateSetting> settings;
  int id = 0;
  for (const auto& [q, h] : angles) {
    settings.push_back({id++, deg_to_rad(q), deg_to_rad(h)});
  }
  return settings;
}

CompletenessReport check_completeness(std::span<const WaveplateSetting> settings) {
  CompletenessReport report;
  if (settings.empty()) return report;

  Eigen::MatrixXd rows(4 * settings.size(), 10);
  const Eigen::Matrix<double, 10, 1> identity = hermitian_coordinates(Matrix4c::Identity());
  int r = 0;
  for (const auto& s : settings) {
    for (const auto& e : measurement_operators(s)) {
      Eigen::Matrix<double, 10, 1> v = hermitian_coordinates(e);
      v -= (v.dot(identity) / identity.squaredNorm()) * identity;
      rows.row(r++) = v.transpose();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  const auto& sv = svd.singularValues();
  report.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double threshold = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++report.rank;
  }
  return report;
}

const WaveplateSetting& TomographyDataset::setting(int setting_id) const {
  for (const auto& s : settings) {
    if (s.setting_id == setting_id) return s;
  }
  throw FormatError("unknown setting id " + std::to_string(setting_id));
}

void TomographyDataset::validate() const {
  if (records.empty()) throw FormatError("dataset has no records");
  for (const auto& s : settings) {
    if (!std::isfinite(s.hwp_angle) || (s.qwp_angle && !std::isfinite(*s.qwp_angle))) {
      throw FormatError("non-finite wave-plate angle in setting " + std::to_string(s.setting_id));
    }
  }
  for (const auto& rec : records) {
    setting(rec.setting_id);
    for (double n : rec.counts) {
      if (!(n >= 0.0) || !std::isfinite(n)) {
        throw FormatError("negative or non-finite count in setting " + std::to_string(rec.setting_id));
      }
    }
    if (!(rec.duration > 0.0) || !std::isfinite(rec.duration)) {
      throw FormatError("duration must be positive");
    }
    if (!(rec.window > 0.0) || !std::isfinite(rec.window)) {
      throw FormatError("coincidence window must be positive");
    }
    for (double r : rec.singles_rates) {
      if (!(r >= 0.0) || !std::isfinite(r)) throw FormatError("singles rates must be non-negative");
    }
  }
}

double pair_rate_for_accidental_fraction(double singles1, double singles2, double window,
                                         double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw FormatError("accidental fraction must lie in (0, 1)");
  return singles1 * singles2 * window * (1.0 - fraction) / fraction;
}

std::array<double, 4> expected_counts(const PolarizationDensityMatrix& rho, const WaveplateSetting& setting,
                                      const SimulationParams& params) {
  const Effects effects = measurement_operators(setting);
  const double accidentals =
      params.singles_rate * params.singles_rate * params.window * params.duration / 4.0;
  std::array<double, 4> mean{};
  for (int k = 0; k < 4; ++k) {
    const double p = std::max(0.0, (effects[k] * rho.entries()).trace().real());
    mean[k] = params.pair_rate * params.duration * kDetectionEfficiency[k] * p + accidentals;
  }
  return mean;
}

namespace {

void check_params(const PolarizationDensityMatrix& rho, const SimulationParams& params) {
  require_physical(rho, "simulate_counts");
  if (!(params.singles_rate >= 0.0) || !(params.pair_rate >= 0.0)) {
    throw FormatError("rates must be non-negative");
  }
  if (!(params.duration > 0.0) || !(params.window > 0.0)) {
    throw FormatError("duration and window must be positive");
  }
}

CountRecord make_record(int id, const SimulationParams& params) {
  CountRecord rec;
  rec.setting_id = id;
  rec.duration = params.duration;
  rec.singles_rates = {params.singles_rate, params.singles_rate};
  rec.window = params.window;
  return rec;
}

}  // namespace

TomographyDataset simulate_counts(const PolarizationDensityMatrix& rho,
                                  std::span<const WaveplateSetting> settings, const SimulationParams& params) {
  check_params(rho, params);
  std::mt19937_64 rng(params.seed);
  TomographyDataset data;
  data.settings.assign(settings.begin(), settings.end());
  const double accidentals =
      params.singles_rate * params.singles_rate * params.window * params.duration / 4.0;
  for (const auto& s : settings) {
    CountRecord rec = make_record(s.setting_id, params);
    const auto mean = expected_counts(rho, s, params);
    for (int k = 0; k < 4; ++k) {
      const double true_mean = mean[k] - accidentals;
      double n = 0.0;
      if (true_mean > 0.0) n += static_cast<double>(std::poisson_distribution<long long>(true_mean)(rng));
      if (accidentals > 0.0) n += static_cast<double>(std::poisson_distribution<long long>(accidentals)(rng));
      rec.counts[k] = n;
    }
    data.records.push_back(rec);
  }
  return data;
}

TomographyDataset expected_dataset(const PolarizationDensityMatrix& rho,
                                   std::span<const WaveplateSetting> settings, const SimulationParams& params) {
  check_params(rho, params);
  TomographyDataset data;
  data.settings.assign(settings.begin(), settings.end());
  for (const auto& s : settings) {
    CountRecord rec = make_record(s.setting_id, params);
    rec.counts = expected_counts(rho, s, params);
    data.records.push_back(rec);
  }
  return data;
}

TomographyDataset subtract_accidentals(const TomographyDataset& dataset) {
  TomographyDataset out = dataset;
  for (auto& rec : out.records) {
    const bool rates_ok = std::isfinite(rec.singles_rates[0]) && std::isfinite(rec.singles_rates[1]) &&
                          rec.singles_rates[0] >= 0.0 && rec.singles_rates[1] >= 0.0;
    if (!rates_ok || !std::isfinite(rec.window) || rec.window < 0.0) {
      throw FormatError("subtract_accidentals: missing singles rates or window in setting " +
                        std::to_string(rec.setting_id));
    }
    const double per_outcome = rec.expected_accidentals() / 4.0;
    if (!rec.raw_counts) rec.raw_counts = rec.counts;
    for (auto& n : rec.counts) n = std::max(0.0, n - per_outcome);
  }
  return out;
}

PolarizationDensityMatrix measured_fixture(char state_id) {
  switch (state_id) {
    case 'a':
      return PolarizationDensityMatrix::diagonal(0.01, 0.94, 0.01, 0.04);
    case 'b':
      return PolarizationDensityMatrix::diagonal(0.02, 0.68, 0.02, 0.28);
    case 'c':
      return PolarizationDensityMatrix::diagonal(0.005, 0.49, 0.005, 0.50);
    case 'd': {
      Matrix4c m = PolarizationDensityMatrix::diagonal(0.03, 0.66, 0.15, 0.16).entries();
      m(sym::kPsiPlus, sym::kVV) = 0.20;
      m(sym::kVV, sym::kPsiPlus) = 0.20;
      return PolarizationDensityMatrix(m);
    }
    default:
      throw FormatError(std::string("unknown fixture id '") + state_id + "' (expected a, b, c or d)");
  }
}

}  // namespace noontomo
