#pragma once

// Closed-form limits for weak pumping and weak dissipation (F, gamma << dw).

#include <cmath>
#include <string>
#include <vector>

#include "ddbh/fock.hpp"
#include "ddbh/params.hpp"

namespace ddbh::weak {

/// Dimensionless weak-drive parameters: epsilon = F/dw, eta = gamma/dw, u = U/dw.
struct WeakDriveParams {
  double epsilon = 1e-2;
  double eta = 1e-3;
  double u = 0.0;

  static WeakDriveParams from(const SystemParams& p) {
    return {std::abs(p.f) / p.delta_omega, p.gamma / p.delta_omega, p.u / p.delta_omega};
  }

  /// The closed forms are asymptotic; values above 0.1 are outside their validity.
  std::vector<std::string> validity_warnings() const {
    std::vector<std::string> w;
    if (epsilon > 0.1) w.push_back("epsilon = F/dw exceeds 0.1; weak-drive formulas are asymptotic");
    if (eta > 0.1) w.push_back("eta = gamma/dw exceeds 0.1; weak-dissipation formulas are asymptotic");
    return w;
  }
};

/// U/dw at which n pump photons are resonant with n interacting cavity photons.
inline double resonance_detuning(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "multiphoton resonance needs n >= 2");
  return 2.0 / (n - 1);
}

/// xi = 1 / (1 + 8 eps^4 / eta^2).
inline double xi(double epsilon, double eta) {
  if (!(epsilon > 0.0) || !(eta > 0.0)) throw Error(ErrorCode::InvalidArgument, "xi needs epsilon, eta > 0");
  const double r = epsilon * epsilon / eta;
  return 1.0 / (1.0 + 8.0 * r * r);
}

/// <b> = (F/dw)(2 xi - 1) + i (gamma / 2F)(xi - 1) at the two-photon resonance.
inline Complex two_photon_coherence(const SystemParams& p, double xi_value) {
  const double f = std::abs(p.f);
  if (!(f > 0.0)) throw Error(ErrorCode::InvalidArgument, "two-photon coherence needs F > 0");
  return {f / p.delta_omega * (2.0 * xi_value - 1.0), p.gamma / (2.0 * f) * (xi_value - 1.0)};
}

/// n = 1 - xi, g2 = 1/(2(1 - xi)) at the two-photon resonance. The coherence
/// needs the drive, so it is filled only by the overload below.
inline Observables two_photon_observables(double xi_value) {
  if (!(xi_value >= 0.0) || !(xi_value < 1.0)) throw Error(ErrorCode::XiOutOfRange, "xi must lie in [0, 1)");
  Observables obs;
  obs.n_mean = 1.0 - xi_value;
  obs.g2 = 1.0 / (2.0 * (1.0 - xi_value));
  return obs;
}

inline Observables two_photon_observables(const SystemParams& p, double xi_value) {
  Observables obs = two_photon_observables(xi_value);
  obs.coherence = two_photon_coherence(p, xi_value);
  return obs;
}

/// rho = 2^-n sum_k C(n,k) |k><k| on {|0>, ..., |n>}.
inline DensityMatrix binomial_mixture(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "binomial mixture needs n >= 1");
  std::vector<double> pops(n + 1);
  double c = 1.0;
  for (int k = 0; k <= n; ++k) {
    pops[k] = c;
    c = c * (n - k) / (k + 1);
  }
  return diagonal_rho(pops);
}

struct OffResonanceConfig {
  double guard = 0.1;              // minimum distance of u from 2 (and from 1)
  bool guard_three_photon = true;  // keep u away from the three-photon resonance at 1
};

/// Lowest-order stationary matrix on {|0>, |1>, |2>} away from the one- and
/// two-photon resonances, trace-renormalized.
inline DensityMatrix offres_density_matrix(const WeakDriveParams& w, const OffResonanceConfig& cfg = {}) {
  if (std::abs(2.0 - w.u) < cfg.guard) throw Error(ErrorCode::NearResonance, "U/dw within the resonance guard of 2");
  // The matrix itself has no pole at u = 1, but there the three-photon resonance
  // feeds |3> with weight ~ eps^6/eta^2, which dominates <b^2 b^2> unless eps^2 << eta.
  if (cfg.guard_three_photon && std::abs(1.0 - w.u) < cfg.guard)
    throw Error(ErrorCode::NearResonance, "U/dw within the resonance guard of 1");
  const double e = w.epsilon, h = w.eta, u = w.u;
  const Complex i{0.0, 1.0};
  const double s2 = std::sqrt(2.0);
  Matrix rho(3, 3);
  rho(0, 0) = 1.0;
  rho(1, 1) = e * e;
  rho(2, 2) = 2.0 * e * e * e * e / ((2.0 - u) * (2.0 - u));
  rho(0, 1) = e * (1.0 + i * h / 2.0);
  rho(1, 0) = std::conj(rho(0, 1));
  rho(0, 2) = s2 * e * e / (2.0 - u) * (1.0 + i * h / 2.0 * (4.0 - u) / (2.0 - u));
  rho(2, 0) = std::conj(rho(0, 2));
  rho(1, 2) = s2 * e * e * e / (2.0 - u) * (1.0 + i * h / (2.0 - u));
  rho(2, 1) = std::conj(rho(1, 2));
  // The expansion is not positive at O(eps^4); only hermiticity and trace are enforced.
  DensityMatrixTolerances tol;
  tol.positivity = -1.0;
  const Complex tr = rho.trace();
  return DensityMatrix(rho / tr.real(), tol);
}

/// Predicted observables of the off-resonant matrix: n = eps^2, g2 = 4/(2 - u)^2.
inline Observables offres_observables(const WeakDriveParams& w) {
  Observables obs;
  obs.n_mean = w.epsilon * w.epsilon;
  obs.g2 = 4.0 / ((2.0 - w.u) * (2.0 - w.u));
  obs.coherence = w.epsilon;
  return obs;
}

/// Critical tunneling J_c = dw/(n - 1) of the n-photon resonant branch.
inline double critical_coupling(int n, double delta_omega) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "critical coupling needs n >= 2");
  return delta_omega / (n - 1);
}

/// Weak-drive mean-field coherence.
/// Resonant (n-photon): -(n-1)(F/dw) / (1 - (n-1) J/dw). Off resonance: (F/dw)/(1 + J/dw).
inline Complex mf_coherence(int n, const SystemParams& p, bool resonant) {
  const double eps = std::abs(p.f) / p.delta_omega;
  const double jr = p.j / p.delta_omega;
  if (!resonant) return eps / (1.0 + jr);
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "resonant branch needs n >= 2");
  const double den = 1.0 - (n - 1) * jr;
  if (den == 0.0) throw Error(ErrorCode::AtCriticalCoupling, "J equals the critical coupling");
  return -(n - 1) * eps / den;
}

}  // namespace ddbh::weak
