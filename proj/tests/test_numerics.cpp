#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include <boost/multiprecision/cpp_complex.hpp>

#include "ddbh/numerics.hpp"

using namespace ddbh;
using Big = boost::multiprecision::cpp_complex_50;

namespace {

// Direct summation in 50-digit arithmetic, many more terms than needed.
Complex big_series(Complex c, Complex d, double z, int terms = 400) {
  const Big bc(c.real(), c.imag()), bd(d.real(), d.imag()), bz(z);
  Big term(1), sum(1);
  for (int k = 0; k < terms; ++k) {
    term *= bz / ((bc + k) * (bd + k) * Big(k + 1));
    sum += term;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Real roots by sign changes on a fine grid, refined by bisection.
std::vector<double> grid_roots(const std::array<double, 4>& a, double lo, double hi, int n) {
  auto p = [&](double x) { return ((a[3] * x + a[2]) * x + a[1]) * x + a[0]; };
  std::vector<double> out;
  double x0 = lo, f0 = p(lo);
  for (int i = 1; i <= n; ++i) {
    const double x1 = lo + (hi - lo) * i / n, f1 = p(x1);
    if (f0 == 0.0) out.push_back(x0);
    else if (f0 * f1 < 0.0) {
      double l = x0, r = x1;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (l + r);
        ((p(l) < 0.0) == (p(m) < 0.0) ? l : r) = m;
      }
      out.push_back(0.5 * (l + r));
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

}  // namespace

TEST_CASE("pochhammer examples") {
  CHECK(pochhammer(2.0, 3) == Complex{24.0, 0.0});
  CHECK(pochhammer(Complex{0.3, -1.7}, 0) == Complex{1.0, 0.0});
  CHECK(std::abs(pochhammer(-1.5, 2) - 0.75) < 1e-15);
  CHECK_THROWS_AS(pochhammer(1.0, -1), Error);
}

TEST_CASE("hyper_series against extended precision") {
  CHECK(hyper_series(Complex{0.7, 0.2}, Complex{-3.1, 0.4}, 0.0) == Complex{1.0, 0.0});
  const Complex v = hyper_series(2.0, 2.0, 0.1);
  CHECK(std::abs(v.real() - 1.0251392) < 1e-7);
  CHECK(rel(v, big_series(2.0, 2.0, 0.1)) < 1e-15);

  // Near-pole stress case: |c + 1| ~ 1e-2 amplifies every term from k = 2 on.
  const Complex c{-0.99, -0.001};
  const Complex w = hyper_series(c, std::conj(c), 0.5);
  CHECK(rel(w, big_series(c, std::conj(c), 0.5)) < 1e-12);
  CHECK(std::abs(w) > 1e3);
}

TEST_CASE("hyper_series errors") {
  CHECK_THROWS_WITH_AS(hyper_series(-2.0, 1.0, 1.0), doctest::Contains("vanished"), Error);
  SeriesConfig tight;
  tight.max_terms = 3;
  try {
    hyper_series(1.0, 1.0, 50.0, tight);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
  CHECK_THROWS_AS(hyper_series(1.0, 1.0, -1.0), Error);
}

TEST_CASE("scaled accumulation survives huge terms") {
  // (c)_k tiny near resonance, argument large: terms overflow a plain double sum.
  const Complex c{-3.0 + 1e-9, -1e-9};
  const ScaledComplex a = hyper_series_scaled(c + 1.0, std::conj(c), 1e8);
  const ScaledComplex b = hyper_series_scaled(c, std::conj(c), 1e8);
  CHECK(b.log_scale > 0.0);
  CHECK(is_finite(ratio(a, b)));
}

TEST_CASE("solve_cubic examples") {
  auto r = solve_cubic(1, 0, 0, -1);
  REQUIRE(r.size() == 1);
  CHECK(r[0].value == doctest::Approx(1.0).epsilon(1e-14));

  r = solve_cubic(1, -6, 11, -6);
  REQUIRE(r.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(r[i].value == doctest::Approx(i + 1.0).epsilon(1e-13));

  r = solve_cubic(1, -3, 3, -1);  // (x-1)^3
  REQUIRE(r.size() == 1);
  CHECK(r[0].multiplicity == 3);

  r = solve_cubic(1, -4, 5, -2);  // (x-1)^2 (x-2)
  REQUIRE(r.size() == 2);
  CHECK(r[0].multiplicity + r[1].multiplicity == 3);

  CHECK_THROWS_AS(solve_cubic(0, 1, 1, 1), Error);
}

TEST_CASE("density cubic against a bisection oracle") {
  // x = nU at dw=1, J=0, U=1, gamma=0.2, F=0.3.
  const double dw = 1.0, g = 0.2, f = 0.3, u = 1.0;
  const std::array<double, 4> a{-f * f * u, dw * dw + g * g / 4.0, -2.0 * dw, 1.0};
  const auto roots = solve_cubic(a[3], a[2], a[1], a[0]);
  const auto ref = grid_roots(a, -5.0, 5.0, 200000);
  REQUIRE(roots.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(roots[i].value == doctest::Approx(ref[i]).epsilon(1e-9));
}

TEST_CASE("find_fixed_points examples") {
  auto half = [](Complex x) { return x / 2.0; };
  auto r = find_fixed_points(half, {1.0});
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0]) < 1e-10);

  auto quad = [](Complex x) { return x * x - 1.0 + x; };
  r = find_fixed_points(quad, {0.9, -1.1, Complex{1.05, 0.02}});
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] + 1.0) < 1e-10);
  CHECK(std::abs(r[1] - 1.0) < 1e-10);

  CHECK_THROWS_AS(find_fixed_points([](Complex x) -> Complex { throw Error(ErrorCode::PoleHit, "x"); }, {1.0}),
                  Error);
}

TEST_SUITE("properties") {
  TEST_CASE("pochhammer recursion") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int s = 0; s < 20; ++s) {
      const Complex c{d(rng), d(rng)};
      for (int j = 0; j < 50; ++j) {
        const Complex lhs = pochhammer(c, j + 1), rhs = pochhammer(c, j) * (c + static_cast<double>(j));
        CHECK(std::abs(lhs - rhs) <= 1e-13 * std::abs(rhs));
      }
    }
  }

  TEST_CASE("hyper_series symmetric in its lower parameters") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-4.0, 4.0), zz(0.0, 20.0);
    for (int s = 0; s < 200; ++s) {
      const Complex c{d(rng), d(rng)}, e{d(rng), d(rng)};
      const double z = zz(rng);
      const Complex a = hyper_series(c, e, z), b = hyper_series(e, c, z);
      CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    }
  }

  TEST_CASE("cubic roots satisfy the residual bound") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    for (int s = 0; s < 500; ++s) {
      std::array<double, 4> a{d(rng), d(rng), d(rng), d(rng)};
      if (a[3] == 0.0) continue;
      const double scale = std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2]), std::abs(a[3])});
      for (const CubicRoot& r : solve_cubic(a[3], a[2], a[1], a[0])) {
        const double x = r.value;
        CHECK(std::abs(((a[3] * x + a[2]) * x + a[1]) * x + a[0]) <= 1e-10 * scale);
      }
    }
  }

  TEST_CASE("fixed points are invariant under the map") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(0.1, 0.9);
    FixedPointConfig cfg;
    for (int s = 0; s < 50; ++s) {
      const Complex a{d(rng), d(rng) - 0.5}, b{d(rng), d(rng)};
      auto map = [&](Complex x) { return a * std::sin(x) + b; };
      for (const Complex& x : find_fixed_points(map, {0.0, 1.0, -1.0}, cfg)) CHECK(std::abs(map(x) - x) <= cfg.tol);
    }
  }
}
