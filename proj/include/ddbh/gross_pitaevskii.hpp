#pragma once

// Semiclassical (coherent-field) sector of the mean-field lattice.
// The field obeys
//   i d(beta)/dt = (-dw - J - i gamma/2 + U |beta|^2) beta + F,
// so in the steady state the lattice only shifts the detuning dw -> dw + J.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ddbh/numerics.hpp"
#include "ddbh/params.hpp"
#include "ddbh/spectrum.hpp"

namespace ddbh::gp {

struct GPState {
  Complex beta{0.0, 0.0};
  double n = 0.0;  // |beta|^2
};

enum class Stability { Monostable, Bistable };

inline double shifted_detuning(const SystemParams& p) { return p.delta_omega + p.j; }

/// beta = F / (dw + J - U n + i gamma/2) for a given density n.
inline Complex field_for_density(const SystemParams& p, double n) {
  return p.f / Complex{shifted_detuning(p) - p.u * n, p.gamma / 2.0};
}

/// Residual of n((dw + J - nU)^2 + gamma^2/4) - |F|^2, relative to |F|^2.
inline double density_residual(const SystemParams& p, double n) {
  const double d = shifted_detuning(p) - n * p.u;
  const double f2 = std::norm(p.f);
  return std::abs(n * (d * d + p.gamma * p.gamma / 4.0) - f2) / std::max(f2, 1e-300);
}

/// Physical (positive) steady-state densities, ascending.
inline std::vector<GPState> gp_density_roots(const SystemParams& p) {
  p.check();
  const double dw = shifted_detuning(p);
  const double f2 = std::norm(p.f);
  if (f2 == 0.0) return {GPState{}};
  std::vector<double> ns;
  if (p.u == 0.0) {
    ns.push_back(f2 / (dw * dw + p.gamma * p.gamma / 4.0));
  } else {
    // In x = nU: x^3 - 2 dw x^2 + (dw^2 + gamma^2/4) x - |F|^2 U = 0.
    for (const CubicRoot& r : solve_cubic(1.0, -2.0 * dw, dw * dw + p.gamma * p.gamma / 4.0, -f2 * p.u))
      if (r.value > 0.0) ns.push_back(r.value / p.u);
  }
  std::vector<GPState> out;
  for (double n : ns) {
    // One Newton polish step on the unscaled polynomial keeps the relative residual small.
    for (int it = 0; it < 3; ++it) {
      const double d = dw - n * p.u;
      const double val = n * (d * d + p.gamma * p.gamma / 4.0) - f2;
      const double der = d * d + p.gamma * p.gamma / 4.0 - 2.0 * n * p.u * d;
      if (der == 0.0) break;
      const double next = n - val / der;
      if (!(next > 0.0) || density_residual(p, next) >= density_residual(p, n)) break;
      n = next;
    }
    const Complex beta = field_for_density(p, n);
    out.push_back({beta, std::norm(beta)});
  }
  return out;
}

/// Discriminant of the density cubic in x = nU; positive iff three distinct real roots.
inline double density_discriminant(const SystemParams& p) {
  const double dw = shifted_detuning(p);
  return cubic_discriminant(1.0, -2.0 * dw, dw * dw + p.gamma * p.gamma / 4.0, -std::norm(p.f) * p.u);
}

/// Three distinct positive roots. With dw + J <= 0 the coefficients change sign
/// once, so at most one root is positive.
inline Stability gp_bistable(const SystemParams& p) {
  if (p.u == 0.0 || shifted_detuning(p) <= 0.0) return Stability::Monostable;
  return density_discriminant(p) > 0.0 ? Stability::Bistable : Stability::Monostable;
}

enum class ExpansionOrder { Leading, Next };

struct CriticalU {
  double u_c1 = 0.0;
  double u_c2 = 0.0;
};

/// Small-F/dw expansions of the bistability boundaries in U (absolute units).
inline CriticalU critical_u(const SystemParams& p, ExpansionOrder order) {
  const double f2 = std::norm(p.f);
  if (!(f2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "critical U needs F > 0");
  const double dw = p.delta_omega;
  const double s = 1.0 + p.j / dw;
  const double g2 = p.gamma * p.gamma;
  CriticalU c;
  c.u_c1 = dw * (g2 / (4.0 * f2)) * s;
  c.u_c2 = dw * (4.0 * dw * dw / (27.0 * f2)) * s * s * s;
  if (order == ExpansionOrder::Next) {
    c.u_c1 -= dw * g2 * g2 / (64.0 * dw * dw * f2 * s);
    c.u_c2 += dw * g2 / (12.0 * f2) * s;
  }
  return c;
}

/// Boundaries of the bistable window in U located by bisection on the
/// discriminant sign. Brackets come from the leading-order expansion.
inline CriticalU locate_critical_u(const SystemParams& p, double rel_tol = 1e-12) {
  const CriticalU guess = critical_u(p, ExpansionOrder::Leading);
  auto bistable_at = [&](double u) {
    SystemParams q = p;
    q.u = u;
    return gp_bistable(q) == Stability::Bistable;
  };
  double inside = std::sqrt(guess.u_c1 * guess.u_c2);
  if (!bistable_at(inside)) throw Error(ErrorCode::NoneFound, "no bistable window near the expansion estimate");

  auto bisect = [&](double out, double in) {
    while (std::abs(in - out) > rel_tol * std::abs(in)) {
      const double mid = 0.5 * (in + out);
      (bistable_at(mid) ? in : out) = mid;
    }
    return 0.5 * (in + out);
  };
  double lo = guess.u_c1;
  while (bistable_at(lo)) lo *= 0.5;
  double hi = guess.u_c2;
  while (bistable_at(hi)) hi *= 2.0;
  return {bisect(lo, inside), bisect(hi, inside)};
}

/// omega_pm(k) = +-sqrt((-dw - t_k + 2U n)^2 - U^2 n^2) - i gamma/2.
inline ExcitationSpectrum gp_spectrum(const SystemParams& p, const GPState& state, const std::vector<Momentum>& k_path,
                                      DispersionConvention conv = DispersionConvention::Consistent) {
  ExcitationSpectrum spec;
  spec.k_points = k_path;
  const Complex damping{0.0, -p.gamma / 2.0};
  for (const Momentum& k : k_path) {
    const double tk = hopping_dispersion(p, k, conv);
    const double a = -p.delta_omega - tk + 2.0 * p.u * state.n;
    const double radicand = a * a - p.u * p.u * state.n * state.n;
    const Complex root = std::sqrt(Complex{radicand, 0.0});
    const Complex plus = root + damping, minus = -root + damping;
    spec.branches.push_back({plus, minus});
    if (minus.real() < plus.real() || (minus.real() == plus.real() && minus.imag() <= plus.imag()))
      spec.low_energy.push_back({minus, plus});
    else
      spec.low_energy.push_back({plus, minus});
  }
  return spec;
}

/// Fourth-order Runge-Kutta integration of the single-mode field equation.
inline GPState gp_evolve(const SystemParams& p, Complex beta0, double t_end, double dt) {
  const double rate = std::max({p.gamma, std::abs(shifted_detuning(p)), p.u * std::norm(beta0)});
  if (!(dt > 0.0) || dt > 0.1 / std::max(rate, 1e-300))
    throw Error(ErrorCode::StepTooLarge, "dt must be <= 0.1/max(gamma, |dw+J|, U|beta0|^2)");
  const Complex minus_i{0.0, -1.0};
  auto rhs = [&](Complex b) {
    return minus_i * (Complex{-shifted_detuning(p) + p.u * std::norm(b), -p.gamma / 2.0} * b + p.f);
  };
  Complex b = beta0;
  const long steps = static_cast<long>(std::ceil(t_end / dt));
  const double h = steps > 0 ? t_end / steps : 0.0;
  for (long s = 0; s < steps; ++s) {
    const Complex k1 = rhs(b);
    const Complex k2 = rhs(b + 0.5 * h * k1);
    const Complex k3 = rhs(b + 0.5 * h * k2);
    const Complex k4 = rhs(b + h * k3);
    b += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!is_finite(b)) throw Error(ErrorCode::StepTooLarge, "trajectory diverged");
  }
  return {b, std::norm(b)};
}

}  // namespace ddbh::gp
