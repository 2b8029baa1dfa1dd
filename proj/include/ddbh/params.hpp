#pragma once

#include <cmath>

#include "ddbh/error.hpp"
#include "ddbh/numerics.hpp"

namespace ddbh {

/// Physical parameters of the driven-dissipative lattice, all in one frequency unit.
struct SystemParams {
  double delta_omega = 1.0;  // pump-cavity detuning omega_p - omega_c
  double u = 1.0;            // on-site interaction U
  Complex f{0.1, 0.0};       // drive amplitude F
  double gamma = 0.1;        // loss rate
  double j = 0.0;            // tunneling J
  int z = 4;                 // coordination number

  void check() const {
    if (!(gamma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be >= 0");
    if (!(j >= 0.0)) throw Error(ErrorCode::InvalidArgument, "J must be >= 0");
    if (!(u >= 0.0)) throw Error(ErrorCode::InvalidArgument, "U must be >= 0");
    if (z < 1) throw Error(ErrorCode::InvalidArgument, "coordination number must be >= 1");
    if (!std::isfinite(delta_omega) || !is_finite(f))
      throw Error(ErrorCode::InvalidArgument, "non-finite parameter");
  }

  SystemParams with_drive(Complex drive) const {
    SystemParams p = *this;
    p.f = drive;
    return p;
  }

  /// Parameters from ratios over the detuning, which sets the unit.
  static SystemParams from_ratios(double u_over_dw, double f_over_dw, double gamma_over_dw, double j_over_dw,
                                  double delta_omega = 1.0) {
    SystemParams p;
    p.delta_omega = delta_omega;
    p.u = u_over_dw * delta_omega;
    p.f = Complex{f_over_dw * delta_omega, 0.0};
    p.gamma = gamma_over_dw * delta_omega;
    p.j = j_over_dw * delta_omega;
    return p;
  }
};

/// Normalization of the lattice dispersion t_k.
///  Consistent: t_k = (2J/z)(cos kx + cos ky), so t_0 = J, matching the uniform
///    mean-field shift of the detuning by J.
///  AsPrinted:  t_k = (J/z)(cos kx + cos ky), giving t_0 = J/2 at z = 4.
enum class DispersionConvention { Consistent, AsPrinted };

struct Momentum {
  double kx = 0.0;
  double ky = 0.0;
};

/// Square-lattice hopping amplitude at momentum k (lattice constant 1).
inline double hopping_dispersion(const SystemParams& p, Momentum k,
                                 DispersionConvention conv = DispersionConvention::Consistent) {
  const double pref = (conv == DispersionConvention::Consistent ? 2.0 : 1.0) * p.j / p.z;
  return pref * (std::cos(k.kx) + std::cos(k.ky));
}

}  // namespace ddbh
