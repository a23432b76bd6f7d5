#include <doctest.h>

#include "noontomo/errors.hpp"
#include "noontomo/measurement.hpp"
#include "noontomo/tomography.hpp"
#include "oracles.hpp"

#include <numbers>

using namespace noontomo;
using std::numbers::pi;

namespace {

PolarizationDensityMatrix pure(int index) { return PolarizationDensityMatrix::projector(PurePairState::basis(index)); }
PolarizationDensityMatrix noon(double phi) { return PolarizationDensityMatrix::projector(ideal_noon(phi)); }

double max_abs(const Matrix4c& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

}  // namespace

TEST_CASE("coincidence probability of basis states") {
  for (double phi : {0.0, 0.4, 1.3, -2.0}) {
    CHECK(coincidence_probability(pure(sym::kPsiPlus), {phi}) == doctest::Approx(0.0));
    CHECK(coincidence_probability(pure(sym::kPsiMinus), {phi}) == doctest::Approx(1.0));
  }
  CHECK(coincidence_probability(noon(0.0), {0.0}) == doctest::Approx(0.0));
  CHECK(coincidence_probability(noon(0.0), {pi / 2.0}) == doctest::Approx(1.0));
}

TEST_CASE("coincidence probability matches the product-basis projector trace") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> angle(-pi, pi);
  for (int i = 0; i < 300; ++i) {
    const Matrix4c rho = oracle::random_density(rng, 1 + i % 4);
    const double phi = angle(rng);
    const double c = coincidence_probability(PolarizationDensityMatrix(rho), {phi});
    CHECK(std::abs(c - oracle::coincidence(rho, phi)) < 1e-12);
    CHECK(c >= -1e-12);
    CHECK(c <= 1.0 + 1e-12);
  }
}

TEST_CASE("distinguishable coincidence probability") {
  CHECK(coincidence_probability_distinguishable(pure(sym::kPsiPlus), {0.0}) == doctest::Approx(0.5));
  CHECK(coincidence_probability_distinguishable(noon(0.0), {0.0}) == doctest::Approx(0.0));
  for (double phi : {0.0, 0.3, 2.1})
    CHECK(coincidence_probability_distinguishable(PolarizationDensityMatrix::maximally_mixed(), {phi}) ==
          doctest::Approx(0.5));
}

TEST_CASE("distinguishable probability equals the probability after make_distinguishable") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> angle(-pi, pi);
  for (int i = 0; i < 300; ++i) {
    const PolarizationDensityMatrix rho(oracle::random_density(rng));
    const double phi = angle(rng);
    const auto d = make_distinguishable(rho);
    const double expected = oracle::coincidence(d.entries(), phi);
    CHECK(std::abs(coincidence_probability_distinguishable(rho, {phi}) - expected) < 1e-12);
    if (validate(d).physical()) CHECK(std::abs(coincidence_probability(d, {phi}) - expected) < 1e-12);
  }
}

TEST_CASE("HOM visibility examples") {
  CHECK(hom_visibility(pure(sym::kPsiPlus), {0.0}) == doctest::Approx(1.0));
  CHECK(hom_visibility(PolarizationDensityMatrix::diagonal(0.2, 0.3, 0.2, 0.3), {0.0}) == doctest::Approx(0.0));
  CHECK(hom_visibility(PolarizationDensityMatrix::diagonal(0.02, 0.68, 0.02, 0.28), {0.0}) == doctest::Approx(0.25));
}

TEST_CASE("HOM visibility is undefined for NOON(0) at phi = 0") {
  CHECK_THROWS_AS(hom_visibility(noon(0.0), {0.0}), UndefinedVisibilityError);
  CHECK_THROWS_AS(hom_visibility_from_elements(noon(0.0), {0.0}), UndefinedVisibilityError);
  CHECK_THROWS_AS(hom_dip_depth(noon(0.0), {0.0}), UndefinedVisibilityError);
}

TEST_CASE("both HOM visibility expressions agree") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> angle(-pi, pi);
  for (int i = 0; i < 300; ++i) {
    const PolarizationDensityMatrix rho(oracle::random_density(rng));
    const double phi = angle(rng);
    CHECK(std::abs(hom_visibility(rho, {phi}) - hom_visibility_from_elements(rho, {phi})) < 1e-12);
  }
}

TEST_CASE("HOM visibility grows with the psi+ excess when rho_13 vanishes") {
  double previous = -2.0;
  for (int k = 0; k <= 20; ++k) {
    const double excess = -0.5 + k * 0.05;  // rho22 - rho44 with rho22 + rho44 = 0.5
    const auto rho = PolarizationDensityMatrix::diagonal(0.25, 0.25 + excess / 2.0, 0.25, 0.25 - excess / 2.0);
    const double v = hom_visibility(rho, {0.0});
    CHECK(v > previous);
    previous = v;
  }
}

TEST_CASE("dip depth convention") {
  const auto a = measured_fixture('a');
  const double c = coincidence_probability(a, {0.0});
  const double cd = coincidence_probability_distinguishable(a, {0.0});
  CHECK(hom_dip_depth(a, {0.0}) == doctest::Approx((cd - c) / cd));
}

TEST_CASE("interferometric visibility bound") {
  CHECK(interferometric_visibility_bound(pure(sym::kPsiPlus)) == doctest::Approx(1.0));
  CHECK(interferometric_visibility_bound(pure(sym::kPsiMinus)) == doctest::Approx(0.0));
  CHECK(interferometric_visibility_bound(measured_fixture('a')) == doctest::Approx(0.96 / 1.04));
  CHECK(interferometric_visibility_bound(measured_fixture('a')) == doctest::Approx(0.9231).epsilon(1e-4));
}

TEST_CASE("delay model overlap functions") {
  const DelayModel tri(2.0);
  CHECK(tri.overlap(0.0) == 1.0);
  CHECK(tri.overlap(1.0) == doctest::Approx(0.5));
  CHECK(tri.overlap(-1.0) == doctest::Approx(0.5));
  CHECK(tri.overlap(5.0) == 0.0);
  const DelayModel dexp(1.0, OverlapShape::kDoubleExponential);
  CHECK(dexp.overlap(0.0) == 1.0);
  CHECK(dexp.overlap(1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(dexp.overlap(-1.0) == dexp.overlap(1.0));
  CHECK(dexp.overlap(1e3) < 1e-300);
  CHECK_THROWS_AS(DelayModel(0.0), FormatError);
  CHECK_THROWS_AS(DelayModel(-1.0), FormatError);
}

TEST_CASE("apply_delay examples") {
  const DelayModel model(1.0);
  const auto psi = pure(sym::kPsiPlus);
  CHECK(max_abs(apply_delay(psi, 0.0, model).entries() - psi.entries()) == 0.0);

  const auto far = apply_delay(psi, 10.0, model);
  CHECK(far(1, 1).real() == doctest::Approx(0.5));
  CHECK(far(3, 3).real() == doctest::Approx(0.5));
  CHECK(max_abs(far.entries() - make_distinguishable(psi).entries()) < 1e-15);

  const auto half = apply_delay(psi, 0.5, model);
  CHECK(half(1, 1).real() == doctest::Approx(0.75));
  CHECK(half(3, 3).real() == doctest::Approx(0.25));
}

TEST_CASE("apply_delay matches the time-mode isometry oracle") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const Matrix4c rho = oracle::random_block_density(rng, 1 + i % 4);
    const double o = i == 0 ? 0.0 : (i == 1 ? 1.0 : unit(rng));
    const auto out = apply_overlap(PolarizationDensityMatrix(rho), o);
    CHECK(max_abs(out.entries() - oracle::delayed(rho, o)) < 1e-12);
    const auto report = validate(out);
    CHECK(report.passed());
    CHECK(std::abs(out.entries().trace() - 1.0) < 1e-12);
    CHECK(out(0, 0) == rho(0, 0));
    CHECK(out(2, 2) == rho(2, 2));
  }
}

TEST_CASE("apply_delay rejects states with singlet coherences") {
  std::mt19937_64 rng(35);
  const PolarizationDensityMatrix rho(oracle::random_density(rng));
  CHECK_THROWS_AS(apply_delay(rho, 0.1, DelayModel(1.0)), InvalidStateError);
}

TEST_CASE("HOM scan of psi+ is an exact triangular dip") {
  const auto delays = linspace(-2.0, 2.0, 81);
  const DelayModel model(1.0);
  const auto curve = hom_scan(pure(sym::kPsiPlus), delays, model, {0.0});
  REQUIRE(curve.coincidence_probabilities.size() == delays.size());
  CHECK(curve.minimum == doctest::Approx(0.0));
  CHECK(curve.baseline == doctest::Approx(0.5));
  CHECK(curve.visibility == doctest::Approx(1.0));
  for (std::size_t i = 0; i < delays.size(); ++i) {
    const double expected = 0.5 * (1.0 - model.overlap(delays[i]));
    CHECK(curve.coincidence_probabilities[i] == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("HOM scan floor and baseline for fixture (a)") {
  const auto a = measured_fixture('a');
  const auto delays = linspace(-3.0, 3.0, 61);
  const auto curve = hom_scan(a, delays, DelayModel(1.0), {0.0});
  const double floor = a(3, 3).real() + 0.5 * (a(0, 0).real() + a(2, 2).real());
  CHECK(curve.coincidence_probabilities[30] == doctest::Approx(floor).epsilon(1e-14));
  CHECK(curve.minimum == doctest::Approx(floor).epsilon(1e-14));
  CHECK(curve.baseline == coincidence_probability_distinguishable(a, {0.0}));
}

TEST_CASE("HOM scan is even in delay") {
  std::mt19937_64 rng(36);
  const auto delays = linspace(-2.5, 2.5, 51);
  for (auto shape : {OverlapShape::kTriangular, OverlapShape::kDoubleExponential}) {
    const PolarizationDensityMatrix rho(oracle::random_block_density(rng));
    const auto curve = hom_scan(rho, delays, DelayModel(0.8, shape), {0.3});
    for (std::size_t i = 0; i < delays.size(); ++i)
      CHECK(curve.coincidence_probabilities[i] ==
            doctest::Approx(curve.coincidence_probabilities[delays.size() - 1 - i]).epsilon(1e-14));
  }
}

TEST_CASE("HOM scan rejects an empty delay list") {
  CHECK_THROWS_AS(hom_scan(pure(sym::kPsiPlus), std::vector<double>{}, DelayModel(1.0), {0.0}), FormatError);
}
