#include "noontomo/mle.hpp"

#include "noontomo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace noontomo {

namespace {

constexpr int kParams = 19;
using ParamVector = Eigen::Matrix<double, kParams, 1>;
using ParamMatrix = Eigen::Matrix<double, kParams, kParams>;

// Generators of the block factor T = sum_i t_i G_i: a general complex 3x3
// symmetric block (real and imaginary part of each entry) plus a real singlet
// entry. A triangular factor would be cheaper, but it has near-flat spurious
// valleys whenever the estimate is rank deficient; a square factor does not.
const std::array<Matrix4c, kParams>& factor_generators() {
  static const std::array<Matrix4c, kParams> generators = [] {
    std::array<Matrix4c, kParams> g;
    for (auto& m : g) m.setZero();
    const Complex i(0.0, 1.0);
    int k = 0;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        g[k++](r, c) = 1.0;
        g[k++](r, c) = i;
      }
    }
    g[k](3, 3) = 1.0;
    return g;
  }();
  return generators;
}

// Parameter index of the real part of block entry (r, c), and of the singlet.
constexpr int real_index(int r, int c) { return 2 * (3 * r + c); }
constexpr int kSingletIndex = 18;

Matrix4c factor(const ParamVector& t) {
  const auto& g = factor_generators();
  Matrix4c m = Matrix4c::Zero();
  for (int i = 0; i < kParams; ++i) m += t(i) * g[i];
  return m;
}

// Tr[E T^dagger T] = t^T M t with M_ij = Re Tr[E G_i^dagger G_j].
ParamMatrix quadratic_form(const Matrix4c& effect) {
  const auto& g = factor_generators();
  ParamMatrix m;
  for (int i = 0; i < kParams; ++i) {
    for (int j = i; j < kParams; ++j) {
      m(i, j) = (effect * g[i].adjoint() * g[j]).trace().real();
      m(j, i) = m(i, j);
    }
  }
  return 0.5 * (m + m.transpose());
}

struct Term {
  ParamMatrix q;      // scale * duration * eta * M(E)
  double background;  // b
  double count;       // n
};

struct Evaluation {
  double value = std::numeric_limits<double>::infinity();
  ParamVector gradient = ParamVector::Zero();
  ParamMatrix hessian = ParamMatrix::Zero();
};

class Objective {
 public:
  Objective(std::vector<Term> terms, double total_counts)
      : terms_(std::move(terms)), inv_total_(1.0 / total_counts) {}

  double value(const ParamVector& t) const {
    double f = 0.0;
    for (const auto& term : terms_) {
      const double mu = t.dot(term.q * t) + term.background;
      if (term.count > 0.0) {
        if (!(mu > 0.0)) return std::numeric_limits<double>::infinity();
        f += mu - term.count * std::log(mu);
      } else {
        f += mu;
      }
    }
    return f * inv_total_;
  }

  Evaluation evaluate(const ParamVector& t, bool with_hessian) const {
    Evaluation e;
    e.value = 0.0;
    for (const auto& term : terms_) {
      const ParamVector qt = term.q * t;
      const double mu = t.dot(qt) + term.background;
      double weight = 1.0;
      if (term.count > 0.0) {
        if (!(mu > 0.0)) {
          e.value = std::numeric_limits<double>::infinity();
          return e;
        }
        e.value += mu - term.count * std::log(mu);
        weight = 1.0 - term.count / mu;
        if (with_hessian) e.hessian.noalias() += (4.0 * term.count / (mu * mu)) * qt * qt.transpose();
      } else {
        e.value += mu;
      }
      e.gradient.noalias() += (2.0 * weight) * qt;
      if (with_hessian) e.hessian.noalias() += (2.0 * weight) * term.q;
    }
    e.value *= inv_total_;
    e.gradient *= inv_total_;
    e.hessian *= inv_total_;
    return e;
  }

 private:
  std::vector<Term> terms_;
  double inv_total_;
};

struct StartResult {
  ParamVector t;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Newton's method with Levenberg damping on the exact Hessian.
StartResult minimize(const Objective& objective, ParamVector t, const MleOptions& options) {
  StartResult out;
  Evaluation e = objective.evaluate(t, true);
  double lambda = 1e-3 * std::max(1e-12, e.hessian.diagonal().cwiseAbs().maxCoeff());
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (e.gradient.norm() <= options.gradient_tolerance) {
      out.converged = true;
      break;
    }
    bool stepped = false;
    while (lambda < 1e30) {
      ParamMatrix a = e.hessian;
      a.diagonal().array() += lambda;
      Eigen::LLT<ParamMatrix> llt(a);
      if (llt.info() != Eigen::Success) {
        lambda *= 10.0;
        continue;
      }
      const ParamVector candidate = t - llt.solve(e.gradient);
      Evaluation next = objective.evaluate(candidate, true);
      const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(e.value);
      if (next.value < e.value ||
          (next.value <= e.value + slack && next.gradient.norm() < e.gradient.norm())) {
        t = candidate;
        e = std::move(next);
        lambda = std::max(lambda / 5.0, 1e-15);
        stepped = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!stepped) break;
  }
  out.t = t;
  out.value = e.value;
  out.gradient_norm = e.gradient.norm();
  out.iterations = it;
  if (!out.converged && out.gradient_norm <= options.gradient_tolerance) out.converged = true;
  return out;
}

struct Model {
  std::vector<Term> terms;
  double total_counts = 0.0;
  double scale = 1.0;
};

std::vector<WaveplateSetting> used_settings(const TomographyDataset& dataset) {
  std::vector<WaveplateSetting> used;
  for (const auto& rec : dataset.records) {
    const auto& s = dataset.setting(rec.setting_id);
    const bool seen = std::any_of(used.begin(), used.end(),
                                  [&](const WaveplateSetting& u) { return u.setting_id == s.setting_id; });
    if (!seen) used.push_back(s);
  }
  return used;
}

double background_for(const CountRecord& rec, AccidentalsMode mode) {
  return mode == AccidentalsMode::kBackground ? rec.expected_accidentals() / 4.0 : 0.0;
}

Model build_model(const TomographyDataset& dataset, AccidentalsMode mode) {
  Model model;
  double signal = 0.0;
  double exposure = 0.0;  // sum duration * eta_k * Tr[E_k]/4, i.e. counts per unit pair rate for I/4
  std::vector<std::pair<Effects, const CountRecord*>> records;
  for (const auto& rec : dataset.records) {
    records.emplace_back(measurement_operators(dataset.setting(rec.setting_id)), &rec);
    for (int k = 0; k < 4; ++k) {
      model.total_counts += rec.counts[k];
      signal += rec.counts[k] - background_for(rec, mode);
      exposure += rec.duration * kDetectionEfficiency[k] * records.back().first[k].trace().real() / 4.0;
    }
  }
  if (!(model.total_counts > 0.0)) throw FormatError("dataset contains no counts");
  model.scale = std::max(signal, 1e-6 * model.total_counts) / exposure;

  for (const auto& [effects, rec] : records) {
    for (int k = 0; k < 4; ++k) {
      const double weight = model.scale * rec->duration * kDetectionEfficiency[k];
      model.terms.push_back({weight * quadratic_form(effects[k]), background_for(*rec, mode), rec->counts[k]});
    }
  }
  return model;
}

PolarizationDensityMatrix normalized_state(const ParamVector& t) {
  const Matrix4c f = factor(t);
  Matrix4c x = f.adjoint() * f;
  x = 0.5 * (x + x.adjoint());
  return PolarizationDensityMatrix(x / x.trace().real());
}

ParamVector mixed_start() {
  ParamVector t = ParamVector::Zero();
  for (int d = 0; d < 3; ++d) t(real_index(d, d)) = 0.5;
  t(kSingletIndex) = 0.5;
  return t;
}

ParamVector random_start(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ParamVector t;
  for (int i = 0; i < kParams; ++i) t(i) = normal(rng);
  t(kSingletIndex) = std::abs(t(kSingletIndex)) + 0.1;
  return t / t.norm();
}

}  // namespace

MleResult mle_reconstruct(const TomographyDataset& dataset, const MleOptions& options) {
  dataset.validate();
  const auto settings = used_settings(dataset);
  const CompletenessReport completeness = check_completeness(settings);
  if (!completeness.passed()) {
    throw IncompleteSettingsError("wave-plate settings are not informationally complete (rank " +
                                  std::to_string(completeness.rank) + " < " +
                                  std::to_string(completeness.required) + ")");
  }

  const Model model = build_model(dataset, options.accidentals);
  const Objective objective(model.terms, model.total_counts);

  std::mt19937_64 rng(options.seed);
  std::vector<StartResult> results;
  const int starts = std::max(1, options.starts);
  for (int s = 0; s < starts; ++s) {
    results.push_back(minimize(objective, s == 0 ? mixed_start() : random_start(rng), options));
  }

  const auto best = std::min_element(results.begin(), results.end(),
                                     [](const StartResult& a, const StartResult& b) { return a.value < b.value; });
  MleResult out{normalized_state(best->t), {}};
  auto& d = out.diagnostics;
  d.iterations = best->iterations;
  d.gradient_norm = best->gradient_norm;
  d.converged = std::all_of(results.begin(), results.end(), [](const StartResult& r) { return r.converged; });
  d.settings_rank = completeness.rank;
  d.pair_rate = model.scale * factor(best->t).squaredNorm();
  d.starts = starts;
  for (const auto& r : results) {
    d.start_spread = std::max(d.start_spread, trace_distance(out.rho, normalized_state(r.t)));
    d.start_log_likelihoods.push_back(-r.value * model.total_counts);
  }
  d.log_likelihood = log_likelihood(dataset, out.rho, d.pair_rate, options.accidentals);
  return out;
}

double log_likelihood(const TomographyDataset& dataset, const PolarizationDensityMatrix& rho,
                      double pair_rate, AccidentalsMode mode) {
  double total = 0.0;
  for (const auto& rec : dataset.records) {
    const Effects effects = measurement_operators(dataset.setting(rec.setting_id));
    for (int k = 0; k < 4; ++k) {
      const double p = (effects[k] * rho.entries()).trace().real();
      const double mu = pair_rate * rec.duration * kDetectionEfficiency[k] * p + background_for(rec, mode);
      if (rec.counts[k] > 0.0) {
        if (!(mu > 0.0)) return -std::numeric_limits<double>::infinity();
        total += rec.counts[k] * std::log(mu);
      }
      total -= mu;
    }
  }
  return total;
}

}  // namespace noontomo
