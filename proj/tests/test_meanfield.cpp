#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ddbh/lindblad.hpp"
#include "ddbh/meanfield.hpp"
#include "ddbh/weak_drive.hpp"
#include "support.hpp"

using namespace ddbh;
using testing::rel;

namespace {

SystemParams resonant_params(int n, double j_ratio) {
  const double eps = 1e-2;
  return SystemParams::from_ratios(weak::resonance_detuning(n), eps, std::pow(eps, n) / 10.0, j_ratio);
}

}  // namespace

TEST_CASE("J = 0 reduces to the single-cavity coherence") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    const auto p = testing::random_params(rng);
    const auto sols = meanfield::solve(p);
    REQUIRE(sols.size() == 1);
    CHECK(std::abs(sols[0].b - exact::coherence(p)) <= 1e-10);
    CHECK(sols[0].f_eff == p.f);
  }
}

TEST_CASE("weak drive: resonant branch follows the closed form below J_c") {
  for (int n = 2; n <= 4; ++n) {
    const double jc = weak::critical_coupling(n, 1.0);
    for (double x : {0.0, 0.2, 0.4}) {
      const auto p = resonant_params(n, x * jc);
      const auto sols = meanfield::solve(p);
      REQUIRE(sols.size() == 1);
      const Complex ref = weak::mf_coherence(n, p, true);
      CHECK(rel(sols[0].b.real(), ref.real()) < 0.01);
      CHECK(sols[0].b.real() < 0.0);
    }
  }
}

TEST_CASE("weak drive: off-resonant branch is in phase with the drive") {
  for (double j : {0.0, 0.5, 1.0}) {
    const auto p = SystemParams::from_ratios(0.5, 1e-3, 1e-4, j);
    const auto sols = meanfield::solve(p);
    const Complex ref = weak::mf_coherence(2, p, false);
    CHECK(rel(sols.front().b.real(), ref.real()) < 1e-5);
    CHECK(sols.front().b.real() > 0.0);
  }
}

TEST_CASE("bistable point: outer fixed points stable, middle unstable") {
  const auto p = SystemParams::from_ratios(0.5, 0.4, 0.2, 1.0);
  meanfield::SolveOptions opt;
  opt.with_stability = true;
  opt.kgrid = 2;
  const auto sols = meanfield::solve(p, opt);
  REQUIRE(sols.size() == 3);
  CHECK(sols[0].stable == StabilityVerdict::Stable);
  CHECK(sols[1].stable == StabilityVerdict::Unstable);
  CHECK(sols[2].stable == StabilityVerdict::Stable);
  CHECK(meanfield::densest(sols) == &sols[2]);
  CHECK(meanfield::densest(sols, true) == &sols[2]);
}

TEST_CASE("sweep keeps branches through the hysteresis region") {
  const auto base = SystemParams::from_ratios(0.5, 0.4, 0.2, 0.0);
  std::vector<double> js;
  for (int i = 0; i <= 12; ++i) js.push_back(0.25 * i);
  const auto pts = meanfield::sweep(base, meanfield::Axis::J, js);
  REQUIRE(pts.size() == js.size());
  std::size_t most = 0;
  for (const auto& pt : pts) {
    CHECK(pt.error.empty());
    most = std::max(most, pt.solutions.size());
  }
  CHECK(most >= 3);
  CHECK_THROWS_AS(meanfield::sweep(base, meanfield::Axis::J, {1.0, 0.5}), Error);
}

TEST_CASE("phase diagram: weak interaction is monostable, order independent of workers") {
  const auto base = SystemParams::from_ratios(1.0, 0.4, 0.2, 0.0);
  const std::vector<double> us{0.01, 0.02}, js{0.0, 0.5};
  meanfield::PhaseDiagramOptions opt;
  opt.kgrid = 2;
  opt.workers = 1;
  const auto a = meanfield::phase_diagram(base, us, js, opt);
  opt.workers = 3;
  const auto b = meanfield::phase_diagram(base, us, js, opt);
  for (std::size_t i = 0; i < us.size(); ++i)
    for (std::size_t j = 0; j < js.size(); ++j) {
      CHECK(a[i][j].classification == meanfield::Classification::Monostable);
      CHECK(a[i][j].gp_classification == meanfield::Classification::Monostable);
      CHECK(a[i][j].converged);
      CHECK(a[i][j].u_over_dw == us[i]);
      CHECK(a[i][j].j_over_dw == js[j]);
      CHECK(a[i][j].n_solutions == b[i][j].n_solutions);
    }
}

TEST_CASE("with_axis sets ratios over the detuning") {
  auto p = SystemParams::from_ratios(1.0, 0.4, 0.2, 0.0, 2.0);
  CHECK(meanfield::with_axis(p, meanfield::Axis::J, 1.5).j == 3.0);
  CHECK(meanfield::with_axis(p, meanfield::Axis::U, 0.5).u == 1.0);
  CHECK(meanfield::with_axis(p, meanfield::Axis::F, 0.1).f == Complex{0.2, 0.0});
  CHECK(meanfield::with_axis(p, meanfield::Axis::Gamma, 0.25).gamma == 0.5);
}

TEST_SUITE("properties") {
  TEST_CASE("every solution is a fixed point of the map") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> dj(0.0, 3.0);
    for (int i = 0; i < 15; ++i) {
      auto p = testing::random_params(rng);
      p.j = dj(rng);
      const meanfield::SolveOptions opt;
      for (const auto& s : meanfield::solve(p, opt)) {
        CHECK(s.residual <= opt.fixed_point.tol);
        CHECK(std::abs(meanfield::self_consistent_map(s.b, p) - s.b) <= opt.fixed_point.tol);
        CHECK(s.f_eff == p.f - p.j * s.b);
      }
    }
  }

  TEST_CASE("solutions agree with the Lindblad steady state at the effective drive") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> dj(0.0, 3.0);
    for (int i = 0; i < 6; ++i) {
      auto p = testing::random_params(rng);
      p.j = dj(rng);
      for (const auto& s : meanfield::solve(p)) {
        const DensityMatrix rho = oracle::adaptive_steady_state(p, s.f_eff).rho;
        CHECK(std::abs(observables_from(rho).coherence - s.b) <= 1e-6 * std::max(1.0, std::abs(s.b)));
        CHECK(observables_from(rho).n_mean == doctest::Approx(s.obs.n_mean).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("solutions are distinct and ordered by modulus") {
    const auto sols = meanfield::solve(SystemParams::from_ratios(0.5, 0.4, 0.2, 3.0));
    for (std::size_t i = 1; i < sols.size(); ++i) {
      CHECK(std::abs(sols[i].b) >= std::abs(sols[i - 1].b));
      CHECK(std::abs(sols[i].b - sols[i - 1].b) > 1e-6);
    }
  }
}
