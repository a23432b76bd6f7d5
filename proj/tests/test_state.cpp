#include <doctest.h>

#include "noontomo/errors.hpp"
#include "noontomo/state.hpp"
#include "oracles.hpp"

#include <numbers>

using namespace noontomo;

namespace {

PolarizationDensityMatrix pure(int index) { return PolarizationDensityMatrix::projector(PurePairState::basis(index)); }

double max_abs(const Matrix4c& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("validate accepts the maximally mixed state") {
  CHECK(validate(PolarizationDensityMatrix::maximally_mixed()).passed());
}

TEST_CASE("validate reports a trace defect") {
  Matrix4c m = Matrix4c::Identity() * 0.275;
  const auto r = validate(m);
  CHECK_FALSE(r.passed());
  CHECK(r.trace_defect == doctest::Approx(0.1));
  CHECK(r.hermitian());
  CHECK(r.positive());
}

TEST_CASE("validate flags singlet-triplet coherence") {
  Matrix4c m = pure(sym::kPsiPlus).entries();
  m(1, 3) = m(3, 1) = 0.1;
  const auto r = validate(m);
  CHECK_FALSE(r.block_structured());
  CHECK_FALSE(r.passed());
  CHECK(r.block_coherence[1] == doctest::Approx(0.1));
}

TEST_CASE("validate flags non-hermitian and negative matrices") {
  Matrix4c m = PolarizationDensityMatrix::maximally_mixed().entries();
  m(0, 1) = Complex(0.0, 0.1);
  CHECK_FALSE(validate(m).hermitian());

  Matrix4c n = PolarizationDensityMatrix::diagonal(0.6, 0.6, -0.2, 0.0).entries();
  CHECK_FALSE(validate(n).positive());
  CHECK(validate(n).min_eigenvalue == doctest::Approx(-0.2));
}

TEST_CASE("H1V2 in the symmetry basis splits over psi+ and psi-") {
  Matrix4c hv = Matrix4c::Zero();
  hv(1, 1) = 1.0;
  const auto rho = to_symmetry_basis(ProductBasisMatrix(hv));
  CHECK(rho(1, 1).real() == doctest::Approx(0.5));
  CHECK(rho(3, 3).real() == doctest::Approx(0.5));
  CHECK(rho(1, 3).real() == doctest::Approx(0.5));
  CHECK(rho(3, 1).real() == doctest::Approx(0.5));
  CHECK(rho(0, 0) == Complex(0.0));
}

TEST_CASE("HH maps to the first basis vector") {
  Matrix4c hh = Matrix4c::Zero();
  hh(0, 0) = 1.0;
  const auto rho = to_symmetry_basis(ProductBasisMatrix(hh));
  CHECK(max_abs(rho.entries() - pure(sym::kHH).entries()) < 1e-15);
}

TEST_CASE("maximally mixed state is basis independent") {
  const Matrix4c id = Matrix4c::Identity() / 4.0;
  CHECK(max_abs(to_symmetry_basis(ProductBasisMatrix(id)).entries() - id) < 1e-15);
}

TEST_CASE("to_symmetry_basis rejects unphysical input") {
  Matrix4c m = Matrix4c::Identity() * 0.3;
  CHECK_THROWS_AS(to_symmetry_basis(ProductBasisMatrix(m)), InvalidStateError);
}

TEST_CASE("basis change agrees with the hand-built oracle and round trips") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Matrix4c rho = oracle::random_density(rng, 1 + i % 4);
    const auto prod = to_product_basis(PolarizationDensityMatrix(rho));
    CHECK(max_abs(prod.entries() - oracle::to_product(rho)) < 1e-14);
    const auto back = to_symmetry_basis(prod);
    CHECK(max_abs(back.entries() - rho) < 1e-12);

    Eigen::SelfAdjointEigenSolver<Matrix4c> a(rho), b(prod.entries());
    CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("enforce_block_structure keeps structured states and strips coherences") {
  const auto noon = PolarizationDensityMatrix::projector(ideal_noon(0.3));
  CHECK(max_abs(enforce_block_structure(noon).entries() - noon.entries()) == 0.0);

  Matrix4c hv = Matrix4c::Zero();
  hv(1, 1) = 1.0;
  const auto rho = enforce_block_structure(to_symmetry_basis(ProductBasisMatrix(hv)));
  CHECK(rho(1, 1).real() == doctest::Approx(0.5));
  CHECK(rho(3, 3).real() == doctest::Approx(0.5));
  CHECK(rho(1, 3) == Complex(0.0));
  CHECK(validate(rho).passed());
}

TEST_CASE("enforce_block_structure is PSD preserving and idempotent") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const PolarizationDensityMatrix rho(oracle::random_density(rng, 1 + i % 4));
    const auto once = enforce_block_structure(rho);
    CHECK(validate(once).passed());
    CHECK(validate(once).min_eigenvalue >= std::min(0.0, validate(rho).min_eigenvalue) - 1e-12);
    CHECK(max_abs(enforce_block_structure(once).entries() - once.entries()) == 0.0);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) CHECK(once(r, c) == rho(r, c));
    CHECK(once(3, 3) == rho(3, 3));
  }
}

TEST_CASE("make_distinguishable equalizes psi+ and psi-") {
  const auto d = make_distinguishable(pure(sym::kPsiPlus));
  CHECK(d(1, 1).real() == doctest::Approx(0.5));
  CHECK(d(3, 3).real() == doctest::Approx(0.5));

  const auto fixed = PolarizationDensityMatrix::diagonal(0.1, 0.3, 0.3, 0.3);
  CHECK(max_abs(make_distinguishable(fixed).entries() - fixed.entries()) == 0.0);

  const auto a = make_distinguishable(PolarizationDensityMatrix::diagonal(0.01, 0.94, 0.01, 0.04));
  CHECK(a(1, 1).real() == doctest::Approx(0.49));
  CHECK(a(3, 3).real() == doctest::Approx(0.49));
}

TEST_CASE("make_distinguishable is idempotent and trace preserving") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const PolarizationDensityMatrix rho(oracle::random_block_density(rng));
    const auto once = make_distinguishable(rho);
    CHECK(std::abs(once.entries().trace() - rho.entries().trace()) < 1e-15);
    CHECK(max_abs(make_distinguishable(once).entries() - once.entries()) == 0.0);
    CHECK(once(0, 1) == rho(0, 1));
    CHECK(once(0, 2) == rho(0, 2));
    CHECK(once(1, 2) == rho(1, 2));
  }
}

TEST_CASE("populations") {
  const auto p = populations(pure(sym::kPsiMinus));
  CHECK(p.hh == 0.0);
  CHECK(p.psi_plus == 0.0);
  CHECK(p.vv == 0.0);
  CHECK(p.psi_minus == 1.0);

  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    const auto q = populations(PolarizationDensityMatrix(oracle::random_density(rng)));
    CHECK(q.hh >= 0.0);
    CHECK(q.psi_plus >= 0.0);
    CHECK(q.vv >= 0.0);
    CHECK(q.psi_minus >= 0.0);
    CHECK(std::abs(q.hh + q.psi_plus + q.vv + q.psi_minus - 1.0) < 1e-12);
  }
}

TEST_CASE("populations rejects unphysical input") {
  CHECK_THROWS_AS(populations(PolarizationDensityMatrix::diagonal(0.5, 0.5, 0.5, 0.0)), InvalidStateError);
}

TEST_CASE("fidelity") {
  CHECK(fidelity(pure(sym::kPsiPlus), PurePairState::basis(sym::kPsiPlus)) == doctest::Approx(1.0));
  CHECK(fidelity(PolarizationDensityMatrix::maximally_mixed(), ideal_noon(0.7)) == doctest::Approx(0.25));
  const auto noon0 = PolarizationDensityMatrix::projector(ideal_noon(0.0));
  CHECK(fidelity(noon0, ideal_noon(std::numbers::pi)) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("fidelity ignores the global phase of the pure state") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int i = 0; i < 50; ++i) {
    const PolarizationDensityMatrix rho(oracle::random_density(rng));
    const Vector4c psi = oracle::random_density(rng, 1).col(0).normalized();
    const Vector4c rotated = std::polar(1.0, angle(rng)) * psi;
    CHECK(fidelity(rho, PurePairState(psi)) == doctest::Approx(fidelity(rho, PurePairState(rotated))).epsilon(1e-12));
  }
}

TEST_CASE("ideal_noon amplitudes") {
  const double r = 1.0 / std::sqrt(2.0);
  const auto n0 = ideal_noon(0.0).amplitudes();
  CHECK(n0(0) == Complex(r));
  CHECK(n0(1) == Complex(0.0));
  CHECK(n0(2) == Complex(r));
  CHECK(n0(3) == Complex(0.0));

  const auto n = ideal_noon(0.20).amplitudes();
  CHECK(std::arg(n(2) / n(0)) == doctest::Approx(0.20));

  for (double phi = -3.0; phi < 3.0; phi += 0.37) {
    const auto psi = ideal_noon(phi);
    CHECK(fidelity(PolarizationDensityMatrix::projector(psi), psi) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("PurePairState requires unit norm") {
  Vector4c v = Vector4c::Zero();
  v(0) = 1.1;
  CHECK_THROWS_AS(PurePairState{v}, InvalidStateError);
  CHECK_THROWS_AS(PurePairState::basis(4), InvalidStateError);
}

TEST_CASE("trace distance") {
  CHECK(trace_distance(pure(sym::kHH), pure(sym::kVV)) == doctest::Approx(1.0));
  CHECK(trace_distance(pure(sym::kHH), pure(sym::kHH)) == doctest::Approx(0.0));
}
