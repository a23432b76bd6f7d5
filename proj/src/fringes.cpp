#include "noontomo/fringes.hpp"

#include "noontomo/errors.hpp"
#include "noontomo/optics.hpp"

#include <unsupported/Eigen/NonLinearOptimization>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace noontomo {

NoonFidelity noon_fidelity(const PolarizationDensityMatrix& rho) {
  require_physical(rho, "noon_fidelity");
  const Complex rho31 = rho(sym::kVV, sym::kHH);
  const double diag = 0.5 * (rho(sym::kHH, sym::kHH).real() + rho(sym::kVV, sym::kVV).real());
  const double magnitude = std::abs(rho31);
  return {diag + magnitude, magnitude > 0.0 ? std::arg(rho31) : 0.0};
}

namespace {

struct LinearFit {
  Eigen::Vector3d coeffs;  // a0, a (cos), b (sin)
  double residual_sq = 0.0;
};

LinearFit linear_fit(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double omega) {
  Eigen::MatrixXd design(x.size(), 3);
  design.col(0).setOnes();
  design.col(1) = (omega * x).array().cos().matrix();
  design.col(2) = (omega * x).array().sin().matrix();
  LinearFit fit;
  fit.coeffs = design.colPivHouseholderQr().solve(y);
  fit.residual_sq = (design * fit.coeffs - y).squaredNorm();
  return fit;
}

// y = p0 + p1 cos(p3 x) + p2 sin(p3 x)
struct SinusoidFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const Eigen::VectorXd& x;
  const Eigen::VectorXd& y;

  int inputs() const { return 4; }
  int values() const { return static_cast<int>(x.size()); }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& residual) const {
    const Eigen::ArrayXd arg = p(3) * x.array();
    residual = (p(0) + p(1) * arg.cos() + p(2) * arg.sin()).matrix() - y;
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
    const Eigen::ArrayXd arg = p(3) * x.array();
    const Eigen::ArrayXd c = arg.cos();
    const Eigen::ArrayXd s = arg.sin();
    jac.col(0).setOnes();
    jac.col(1) = c.matrix();
    jac.col(2) = s.matrix();
    jac.col(3) = (x.array() * (p(2) * c - p(1) * s)).matrix();
    return 0;
  }
};

double wrap_phase(double phase) {
  phase = std::remainder(phase, 2.0 * std::numbers::pi);
  if (phase <= -std::numbers::pi) phase += 2.0 * std::numbers::pi;
  return phase;
}

}  // namespace

SinusoidFit fit_sinusoid(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw FormatError("fit_sinusoid: x and y lengths differ");
  if (xs.size() < 8) throw FormatError("fit_sinusoid: at least 8 points are required");
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw FormatError("fit_sinusoid: non-finite data");
    if (ys[i] < 0.0) throw FormatError("fit_sinusoid: negative y value");
  }

  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  const double mean = y.mean();

  SinusoidFit fit;
  fit.offset = mean;
  const double spread = (y.array() - mean).matrix().norm();
  if (spread <= 1e-12 * (std::abs(mean) * std::sqrt(static_cast<double>(y.size())) + 1e-300)) {
    fit.visibility = 0.0;
    fit.period = std::numeric_limits<double>::quiet_NaN();
    fit.period_identified = false;
    fit.residual_norm = spread;
    return fit;
  }

  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double span = sorted.back() - sorted.front();
  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double d = sorted[i] - sorted[i - 1];
    if (d > 1e-12 * span) min_step = std::min(min_step, d);
  }
  if (!(span > 0.0) || !std::isfinite(min_step)) throw FormatError("fit_sinusoid: x values are not distinct");

  // Periodogram: periods from twice the span down to the Nyquist limit.
  const double omega_min = std::numbers::pi / span;
  const double omega_max = std::numbers::pi / min_step;
  const double omega_step = std::numbers::pi / (4.0 * span);
  double best_omega = omega_min;
  double best_residual = std::numeric_limits<double>::infinity();
  for (double omega = omega_min; omega <= omega_max + 0.5 * omega_step; omega += omega_step) {
    const LinearFit lf = linear_fit(x, y, omega);
    if (lf.residual_sq < best_residual) {
      best_residual = lf.residual_sq;
      best_omega = omega;
    }
  }

  const LinearFit seed = linear_fit(x, y, best_omega);
  Eigen::VectorXd p(4);
  p << seed.coeffs(0), seed.coeffs(1), seed.coeffs(2), best_omega;

  SinusoidFunctor functor{x, y};
  Eigen::LevenbergMarquardt<SinusoidFunctor> lm(functor);
  lm.parameters.xtol = 1e-15;
  lm.parameters.ftol = 1e-15;
  lm.parameters.maxfev = 2000;
  const auto status = lm.minimize(p);
  fit.converged = status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters &&
                  status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation;

  // Keep the periodogram seed if the refinement wandered off.
  Eigen::VectorXd residual(x.size());
  functor(p, residual);
  if (!p.allFinite() || residual.squaredNorm() > seed.residual_sq) {
    p << seed.coeffs(0), seed.coeffs(1), seed.coeffs(2), best_omega;
    functor(p, residual);
    fit.converged = false;
  }

  double omega = p(3);
  double a = p(1);
  double b = p(2);
  if (omega < 0.0) {
    omega = -omega;
    b = -b;
  }
  const double amplitude = std::hypot(a, b);
  fit.offset = p(0);
  fit.period = 2.0 * std::numbers::pi / omega;
  fit.phase = wrap_phase(std::atan2(-b, a));
  fit.residual_norm = residual.norm();
  fit.visibility = fit.offset > 0.0 ? std::clamp(amplitude / fit.offset, 0.0, 1.0) : 0.0;
  if (amplitude <= 1e-9 * std::abs(fit.offset)) {
    fit.visibility = 0.0;
    fit.period = std::numeric_limits<double>::quiet_NaN();
    fit.period_identified = false;
  }
  return fit;
}

FringeScan fringe_scan(const PolarizationDensityMatrix& rho, std::span<const double> angles, FringeMode mode) {
  if (angles.size() < 8) throw FormatError("fringe_scan: at least 8 angles are required");
  require_physical(rho, "fringe_scan");

  const TwoPhotonUnitary pre =
      mode == FringeMode::kHv ? lift(qwp(std::numbers::pi / 4.0)) : TwoPhotonUnitary::identity();
  const PolarizationDensityMatrix input = apply(rho, pre);
  Vector2c h;
  h << 1.0, 0.0;

  FringeScan scan;
  scan.angles.assign(angles.begin(), angles.end());
  for (double theta : angles) {
    const JonesMatrix plate = hwp(theta);
    const Matrix4c& u = lift(plate).entries();
    const Matrix4c out = u * input.entries() * u.adjoint();
    scan.coincidences.push_back(
        std::max(0.0, out(sym::kPsiPlus, sym::kPsiPlus).real() + out(sym::kPsiMinus, sym::kPsiMinus).real()));
    scan.singles.push_back(std::norm((plate.entries() * h)(0)));
  }
  scan.singles_fit = fit_sinusoid(scan.angles, scan.singles);
  scan.coincidence_fit = fit_sinusoid(scan.angles, scan.coincidences);
  const auto [lo, hi] = std::minmax_element(scan.coincidences.begin(), scan.coincidences.end());
  scan.coincidence_contrast = (*hi + *lo) > 0.0 ? (*hi - *lo) / (*hi + *lo) : 0.0;
  return scan;
}

}  // namespace noontomo
