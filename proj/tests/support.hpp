#pragma once

// Shared fixtures for the test suites.

#include <random>

#include "ddbh/fock.hpp"
#include "ddbh/params.hpp"

namespace ddbh::testing {

/// A A^dagger / Tr, with A complex Gaussian.
inline DensityMatrix random_rho(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex{g(rng), g(rng)};
  return DensityMatrix::repaired(a * a.adjoint());
}

/// Uniform draw of (U, F, gamma)/dw on the oracle-equivalence box, J = 0.
inline SystemParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> du(0.1, 4.0), df(0.05, 0.5), dg(0.05, 0.5);
  const double u = du(rng), f = df(rng), g = dg(rng);
  return SystemParams::from_ratios(u, f, g, 0.0);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
inline double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace ddbh::testing
