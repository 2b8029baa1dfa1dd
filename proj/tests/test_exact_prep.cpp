#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ddbh/exact_prep.hpp"
#include "ddbh/lindblad.hpp"
#include "support.hpp"

using namespace ddbh;
using testing::rel;

TEST_CASE("linear-cavity limit") {
  auto p = SystemParams::from_ratios(1e-6, 0.3, 0.2, 0.0);
  const double lin = 0.09 / (1.0 + 0.01);
  CHECK(rel(exact::correlation(1, p).real(), lin) < 1e-6);
  CHECK(rel(exact::coherence(p), Complex{0.3, 0.0} / Complex{1.0, 0.1}) < 1e-6);

  p.u = 0.0;
  CHECK(exact::correlation(1, p).real() == doctest::Approx(lin).epsilon(1e-14));
  CHECK(*exact::observables(p).g2 == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("two-photon resonance density") {
  const double eps = 1e-2;
  const auto p = SystemParams::from_ratios(2.0, eps, eps * eps / 10.0, 0.0);
  CHECK(rel(exact::correlation(1, p).real(), 1.0) < 0.02);
}

TEST_CASE("off-resonant g2") {
  for (double u : {0.5, 3.0}) {
    const auto p = SystemParams::from_ratios(u, 1e-3, 1e-4, 0.0);
    CHECK(rel(*exact::observables(p).g2, 4.0 / ((2.0 - u) * (2.0 - u))) < 0.01);
  }
  // U = dw is the three-photon resonance: g2 leaves the perturbative value 4.
  CHECK(*exact::observables(SystemParams::from_ratios(1.0, 1e-3, 1e-4, 0.0)).g2 > 1e3);
}

TEST_CASE("resonant coherence -(q-1) F/dw") {
  const double eps = 1e-2;
  const auto p2 = SystemParams::from_ratios(2.0, eps, 1e-6, 0.0);
  CHECK(rel(exact::coherence(p2), Complex{-eps, 0.0}) < 0.02);
  const auto p3 = SystemParams::from_ratios(1.0, eps, 1e-9, 0.0);
  CHECK(rel(exact::coherence(p3), Complex{-2.0 * eps, 0.0}) < 0.02);
}

TEST_CASE("coherence matches the oracle") {
  std::mt19937_64 rng(41);
  for (int s = 0; s < 10; ++s) {
    const auto p = testing::random_params(rng);
    const auto st = oracle::adaptive_steady_state(p, p.f);
    CHECK(std::abs(exact::coherence(p) - observables_from(st.rho).coherence) < 1e-8);
  }
}

TEST_CASE("density matrix limits") {
  const DensityMatrix vac = exact::density_matrix(SystemParams::from_ratios(1.0, 1e-7, 0.1, 0.0), 4);
  CHECK(vac.population(0) == doctest::Approx(1.0).epsilon(1e-12));

  const double eps = 1e-2;
  const DensityMatrix two = exact::density_matrix_adaptive(SystemParams::from_ratios(2.0, eps, eps * eps / 1000.0, 0.0));
  const double want2[] = {0.25, 0.5, 0.25};
  for (int k = 0; k < 3; ++k) CHECK(std::abs(two.population(k) - want2[k]) < 0.01);

  const DensityMatrix three = exact::density_matrix_adaptive(SystemParams::from_ratios(1.0, eps, 1e-10, 0.0));
  const double want3[] = {0.125, 0.375, 0.375, 0.125};
  for (int k = 0; k < 4; ++k) CHECK(std::abs(three.population(k) - want3[k]) < 0.01);
}

TEST_CASE("truncation guard") {
  const auto p = SystemParams::from_ratios(0.3, 0.5, 0.1, 0.0);
  try {
    exact::density_matrix(p, 2);
    FAIL("expected TruncationTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationTooSmall);
  }
}

TEST_CASE("numerator argument: only 4|F/U|^2 reproduces the oracle") {
  for (auto [u, f, g] : {std::array{1.0, 0.3, 0.2}, std::array{0.3, 0.4, 0.1}, std::array{3.0, 0.5, 0.05}}) {
    const auto p = SystemParams::from_ratios(u, f, g, 0.0);
    const DensityMatrix four = exact::density_matrix_adaptive(p);
    const Matrix ref = oracle::steady_state(oracle::build_liouvillian(p, p.f, four.n_max())).matrix();
    CHECK((four.matrix() - ref).cwiseAbs().maxCoeff() < 1e-7);

    exact::DensityMatrixOptions eight;
    eight.numerator_argument = exact::MatrixElementArgument::Eight;
    const Matrix raw = exact::raw_density_elements(p, four.n_max(), eight);
    CHECK(std::abs(raw.trace() - 1.0) > 0.05);
    CHECK((raw / raw.trace() - ref).cwiseAbs().maxCoeff() > 0.01);
  }
}

TEST_SUITE("properties") {
  TEST_CASE("oracle equivalence on a random grid") {
    std::mt19937_64 rng(20240611);
    double worst = 0.0;
    for (int s = 0; s < 50; ++s) {
      const auto p = testing::random_params(rng);
      const Observables ex = exact::observables(p);
      const Observables orc = observables_from(oracle::adaptive_steady_state(p, p.f).rho);
      worst = std::max({worst, rel(ex.n_mean, orc.n_mean), rel(*ex.g2, *orc.g2), rel(ex.coherence, orc.coherence)});
    }
    CHECK(worst <= 1e-6);
  }

  TEST_CASE("mean density is real and positive") {
    std::mt19937_64 rng(43);
    for (int s = 0; s < 100; ++s) {
      const Complex n = exact::correlation(1, testing::random_params(rng));
      CHECK(n.real() > 0.0);
      CHECK(std::abs(n.imag()) <= 1e-10 * n.real());
    }
  }

  TEST_CASE("populations reproduce the factorial moments") {
    std::mt19937_64 rng(47);
    for (int s = 0; s < 20; ++s) {
      const auto p = testing::random_params(rng);
      const DensityMatrix rho = exact::density_matrix_adaptive(p);
      for (int j = 1; j <= 3; ++j) {
        double moment = 0.0;
        for (int k = j; k < rho.dim(); ++k) {
          double falling = 1.0;
          for (int i = 0; i < j; ++i) falling *= (k - i);
          moment += falling * rho.population(k);
        }
        CHECK(std::abs(exact::correlation(j, p).real() - moment) <= 1e-8);
      }
    }
  }

  TEST_CASE("two-photon coherence vanishes as F^2/(gamma dw) grows") {
    // Two-photon resonance: the state tends to the 50/50 mixture of |0> and |2>,
    // with <0|rho|2> ~ sqrt(xi) ~ gamma dw / F^2.
    auto offdiag = [](double ratio) {
      const double eps = 1e-2;
      const DensityMatrix r =
          exact::density_matrix_adaptive(SystemParams::from_ratios(2.0, eps, eps * eps / ratio, 0.0));
      return std::abs(r(0, 2));
    };
    const double a = offdiag(10.0), b = offdiag(100.0);
    CHECK(a < 0.05);
    CHECK(a / b == doctest::Approx(10.0).epsilon(0.2));
  }
}
