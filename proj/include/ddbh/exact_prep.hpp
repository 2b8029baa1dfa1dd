#pragma once

// Exact steady state of a single driven Kerr cavity from the complex
// P-representation closed forms. A lattice enters only through the drive:
// callers substitute the effective drive F - J<b> before calling.

#include <cmath>
#include <vector>

#include "ddbh/fock.hpp"
#include "ddbh/numerics.hpp"
#include "ddbh/params.hpp"

namespace ddbh::exact {

/// c = 2(-delta_omega - i gamma/2)/U.
inline Complex c_parameter(const SystemParams& p) {
  return 2.0 * Complex{-p.delta_omega, -p.gamma / 2.0} / p.u;
}

/// Steady field of the linear (U = 0) cavity, F/(delta_omega + i gamma/2).
inline Complex linear_field(const SystemParams& p) {
  const Complex den{p.delta_omega, p.gamma / 2.0};
  if (den == Complex{0.0, 0.0}) throw Error(ErrorCode::PoleHit, "undamped resonant linear cavity");
  return p.f / den;
}

/// <(b^dagger)^j b^j> in the steady state.
inline Complex correlation(int j_order, const SystemParams& p, const SeriesConfig& cfg = {}) {
  if (j_order < 1) throw Error(ErrorCode::InvalidArgument, "correlation order must be >= 1");
  p.check();
  if (p.u == 0.0) return std::pow(std::norm(linear_field(p)), j_order);

  const Complex c = c_parameter(p);
  const double arg = 8.0 * std::norm(p.f / p.u);
  if (arg == 0.0) return 0.0;
  const double pref = std::pow(4.0 * std::norm(p.f / p.u), j_order);
  const Complex poch = pochhammer(c, j_order) * pochhammer(std::conj(c), j_order);
  if (poch == Complex{0.0, 0.0}) throw Error(ErrorCode::PoleHit, "Pochhammer product vanished");
  const auto num = hyper_series_scaled(c + static_cast<double>(j_order), std::conj(c) + static_cast<double>(j_order), arg, cfg);
  const auto den = hyper_series_scaled(c, std::conj(c), arg, cfg);
  return pref / poch * ratio(num, den);
}

/// <b> = F/(delta_omega + i gamma/2) * F(1+c, c*, 8|F/U|^2) / F(c, c*, 8|F/U|^2).
inline Complex coherence(const SystemParams& p, const SeriesConfig& cfg = {}) {
  p.check();
  const Complex lin = linear_field(p);
  if (p.u == 0.0) return lin;
  const Complex c = c_parameter(p);
  const double arg = 8.0 * std::norm(p.f / p.u);
  if (arg == 0.0) return lin;
  const auto num = hyper_series_scaled(c + 1.0, std::conj(c), arg, cfg);
  const auto den = hyper_series_scaled(c, std::conj(c), arg, cfg);
  return lin * ratio(num, den);
}

/// n, g2 and <b> from the closed forms.
inline Observables observables(const SystemParams& p, const SeriesConfig& cfg = {}) {
  Observables obs;
  obs.n_mean = correlation(1, p, cfg).real();
  obs.coherence = coherence(p, cfg);
  if (obs.n_mean >= kG2DensityThreshold) obs.g2 = correlation(2, p, cfg).real() / (obs.n_mean * obs.n_mean);
  return obs;
}

/// Argument of the numerator series in the matrix-element formula, in units of |F/U|^2.
/// Four is the form that reproduces the master-equation steady state; Eight is
/// kept so the discrepancy can be demonstrated.
enum class MatrixElementArgument { Four, Eight };

struct DensityMatrixOptions {
  SeriesConfig series{};
  MatrixElementArgument numerator_argument = MatrixElementArgument::Four;
  double leak_tol = 1e-10;  // required bound on the top population before renormalization
};

/// Raw (unnormalized, untruncation-corrected) matrix elements rho_{n,m} = <n|rho|m>.
inline Matrix raw_density_elements(const SystemParams& p, int n_max, const DensityMatrixOptions& opt = {}) {
  p.check();
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  const int d = n_max + 1;
  Matrix rho = Matrix::Zero(d, d);

  if (p.u == 0.0) {
    const Complex beta = linear_field(p);
    Vector psi(d);
    psi(0) = std::exp(-std::norm(beta) / 2.0);
    for (int k = 1; k < d; ++k) psi(k) = psi(k - 1) * beta / std::sqrt(static_cast<double>(k));
    return psi * psi.adjoint();
  }

  const Complex c = c_parameter(p);
  const Complex cc = std::conj(c);
  const double norm_fu = std::norm(p.f / p.u);
  const double num_arg = (opt.numerator_argument == MatrixElementArgument::Four ? 4.0 : 8.0) * norm_fu;
  const auto den = hyper_series_scaled(c, cc, 8.0 * norm_fu, opt.series);

  // a_n = x^n / (sqrt(n!) (c)_n), b_m = x*^m / (sqrt(m!) (c*)_m), x = -2F/U.
  const Complex x = -2.0 * p.f / p.u;
  std::vector<Complex> a(d), b(d);
  a[0] = b[0] = 1.0;
  for (int k = 1; k < d; ++k) {
    const Complex ck = c + static_cast<double>(k - 1);
    const Complex cck = cc + static_cast<double>(k - 1);
    if (ck == Complex{0.0, 0.0}) throw Error(ErrorCode::PoleHit, "Pochhammer factor vanished");
    a[k] = a[k - 1] * x / (std::sqrt(static_cast<double>(k)) * ck);
    b[k] = b[k - 1] * std::conj(x) / (std::sqrt(static_cast<double>(k)) * cck);
  }
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      const auto num = hyper_series_scaled(c + static_cast<double>(n), cc + static_cast<double>(m), num_arg, opt.series);
      rho(n, m) = a[n] * b[m] * ratio(num, den);
    }
  }
  return rho;
}

/// Steady-state density matrix on {|0>, ..., |n_max>}, renormalized to unit trace.
inline DensityMatrix density_matrix(const SystemParams& p, int n_max, const DensityMatrixOptions& opt = {}) {
  const Matrix raw = raw_density_elements(p, n_max, opt);
  if (std::abs(raw(n_max, n_max)) >= opt.leak_tol)
    throw Error(ErrorCode::TruncationTooSmall,
                "top population " + std::to_string(std::abs(raw(n_max, n_max))) + " at n_max=" + std::to_string(n_max));
  return DensityMatrix::repaired(raw);
}

/// Smallest n_max (up to `ceiling`) that satisfies the leak bound.
inline DensityMatrix density_matrix_adaptive(const SystemParams& p, const DensityMatrixOptions& opt = {},
                                             int ceiling = 80) {
  const double n = correlation(1, p, opt.series).real();
  int n_max = std::max(2, static_cast<int>(n));
  for (; n_max <= ceiling; ++n_max) {
    try {
      return density_matrix(p, n_max, opt);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TruncationTooSmall) throw;
    }
  }
  throw Error(ErrorCode::TruncationCeiling, "density matrix needs n_max > " + std::to_string(ceiling));
}

}  // namespace ddbh::exact
