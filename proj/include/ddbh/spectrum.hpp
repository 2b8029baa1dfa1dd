#pragma once

#include <array>
#include <vector>

#include "ddbh/numerics.hpp"
#include "ddbh/params.hpp"

namespace ddbh {

/// Complex eigenfrequencies omega (fluctuations ~ exp(-i omega t)) per momentum.
/// Im(omega) < 0 means the mode decays.
struct ExcitationSpectrum {
  std::vector<Momentum> k_points;
  std::vector<std::vector<Complex>> branches;          // all eigenfrequencies, sorted by decay
  std::vector<std::array<Complex, 2>> low_energy;      // selected pair, ordered by real part
};

/// Gamma -> X -> M -> Gamma on the square lattice, with `per_leg` segments per leg.
/// Returns the path and the arc-length parameter of each point.
inline std::vector<Momentum> square_lattice_path(int per_leg, std::vector<double>* arc = nullptr) {
  constexpr double kPi = 3.14159265358979323846;
  const std::array<Momentum, 4> corners{Momentum{0, 0}, Momentum{kPi, 0}, Momentum{kPi, kPi}, Momentum{0, 0}};
  std::vector<Momentum> path;
  double s = 0.0;
  if (arc) arc->clear();
  for (int leg = 0; leg < 3; ++leg) {
    const Momentum a = corners[leg], b = corners[leg + 1];
    const double len = std::hypot(b.kx - a.kx, b.ky - a.ky);
    for (int i = (leg == 0 ? 0 : 1); i <= per_leg; ++i) {
      const double t = static_cast<double>(i) / per_leg;
      path.push_back({a.kx + t * (b.kx - a.kx), a.ky + t * (b.ky - a.ky)});
      if (arc) arc->push_back(s + t * len);
    }
    s += len;
  }
  return path;
}

/// Uniform n x n grid over [0, pi]^2.
inline std::vector<Momentum> quarter_zone_grid(int n) {
  constexpr double kPi = 3.14159265358979323846;
  std::vector<Momentum> grid;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double kx = n == 1 ? 0.0 : kPi * a / (n - 1);
      const double ky = n == 1 ? 0.0 : kPi * b / (n - 1);
      grid.push_back({kx, ky});
    }
  return grid;
}

}  // namespace ddbh
