#pragma once

// Scalar and series primitives shared by every physics module.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "ddbh/error.hpp"

namespace ddbh {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct SeriesConfig {
  double rel_tol = 1e-14;
  int max_terms = 10000;
};

/// Rising factorial c(c+1)...(c+j-1). Stands in for Gamma(c+j)/Gamma(c).
inline Complex pochhammer(Complex c, int j) {
  if (j < 0) throw Error(ErrorCode::InvalidArgument, "pochhammer order must be non-negative");
  Complex p{1.0, 0.0};
  for (int k = 0; k < j; ++k) p *= (c + static_cast<double>(k));
  return p;
}

/// A complex value stored as mantissa * exp(log_scale); keeps huge series representable.
struct ScaledComplex {
  Complex mantissa{1.0, 0.0};
  double log_scale = 0.0;

  Complex value() const { return mantissa * std::exp(log_scale); }
};

/// Ratio a/b of two scaled values, evaluated without forming either one.
inline Complex ratio(const ScaledComplex& a, const ScaledComplex& b) {
  return (a.mantissa / b.mantissa) * std::exp(a.log_scale - b.log_scale);
}

/// Sum_k z^k / (k! (c)_k (d)_k), accumulated in order k = 0, 1, 2, ...
///
/// Terms follow t_{k+1} = t_k z / ((c+k)(d+k)(k+1)). Near a multiphoton resonance
/// the early denominators are tiny and the sequence is far from monotone, so the
/// loop stops only once two consecutive terms are below rel_tol * |sum| and the
/// next recursion ratio is below 1/2 (a geometric bound on the tail).
inline ScaledComplex hyper_series_scaled(Complex c, Complex d, double z, const SeriesConfig& cfg = {}) {
  if (!(z >= 0.0)) throw Error(ErrorCode::InvalidArgument, "series argument must be >= 0");
  if (!(cfg.rel_tol > 0.0) || cfg.max_terms < 1)
    throw Error(ErrorCode::InvalidArgument, "invalid series configuration");

  constexpr double kRescaleAbove = 1e200;
  ScaledComplex acc;
  Complex sum{1.0, 0.0};
  Complex term{1.0, 0.0};
  double log_scale = 0.0;
  int small_in_row = 0;
  if (z == 0.0) return acc;

  for (int k = 0; k < cfg.max_terms; ++k) {
    const Complex den = (c + static_cast<double>(k)) * (d + static_cast<double>(k)) * static_cast<double>(k + 1);
    if (den == Complex{0.0, 0.0})
      throw Error(ErrorCode::PoleHit, "series denominator vanished at k=" + std::to_string(k));
    term *= z / den;
    sum += term;
    if (std::abs(sum) > kRescaleAbove || std::abs(term) > kRescaleAbove) {
      const double s = std::log(std::max(std::abs(sum), std::abs(term)));
      const double f = std::exp(-s);
      sum *= f;
      term *= f;
      log_scale += s;
    }
    if (!is_finite(sum)) throw Error(ErrorCode::NoConvergence, "series overflowed");

    if (std::abs(term) <= cfg.rel_tol * std::abs(sum)) {
      ++small_in_row;
    } else {
      small_in_row = 0;
    }
    if (small_in_row >= 2) {
      const double kk = static_cast<double>(k + 1);
      const double next_ratio = z / std::abs((c + kk) * (d + kk) * (kk + 1.0));
      if (next_ratio < 0.5) {
        acc.mantissa = sum;
        acc.log_scale = log_scale;
        return acc;
      }
    }
  }
  throw Error(ErrorCode::NoConvergence,
              "series did not converge within " + std::to_string(cfg.max_terms) + " terms");
}

inline Complex hyper_series(Complex c, Complex d, double z, const SeriesConfig& cfg = {}) {
  const Complex v = hyper_series_scaled(c, d, z, cfg).value();
  if (!is_finite(v)) throw Error(ErrorCode::NoConvergence, "series value not representable");
  return v;
}

// ---------------------------------------------------------------------------
// Cubic roots

struct CubicRoot {
  double value;
  int multiplicity;
};

namespace detail {

inline double eval_cubic(const std::array<double, 4>& a, double x) {
  return ((a[3] * x + a[2]) * x + a[1]) * x + a[0];
}

inline double polish_root(const std::array<double, 4>& a, double x) {
  for (int it = 0; it < 50; ++it) {
    const double p = eval_cubic(a, x);
    const double dp = (3.0 * a[3] * x + 2.0 * a[2]) * x + a[1];
    if (dp == 0.0 || p == 0.0) break;
    const double step = p / dp;
    const double next = x - step;
    if (std::abs(eval_cubic(a, next)) >= std::abs(p)) break;
    x = next;
  }
  return x;
}

}  // namespace detail

/// Discriminant of a3 x^3 + a2 x^2 + a1 x + a0: positive iff three distinct real roots.
inline double cubic_discriminant(double a3, double a2, double a1, double a0) {
  return 18.0 * a3 * a2 * a1 * a0 - 4.0 * a2 * a2 * a2 * a0 + a2 * a2 * a1 * a1 - 4.0 * a3 * a1 * a1 * a1 -
         27.0 * a3 * a3 * a0 * a0;
}

/// Real roots of a3 x^3 + a2 x^2 + a1 x + a0 in ascending order, with multiplicities.
inline std::vector<CubicRoot> solve_cubic(double a3, double a2, double a1, double a0) {
  if (a3 == 0.0) throw Error(ErrorCode::DegenerateCubic, "leading coefficient is zero");
  const std::array<double, 4> coeffs{a0, a1, a2, a3};

  // Depressed form t^3 + p t + q with x = t - b/3.
  const double b = a2 / a3, c = a1 / a3, d = a0 / a3;
  const double shift = b / 3.0;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double disc = q * q / 4.0 + p * p * p / 27.0;

  std::vector<double> raw;
  const double scale = std::max({std::abs(p), std::abs(q), 1e-300});
  if (std::abs(disc) <= 1e-14 * scale * scale) {
    // Repeated root.
    if (std::abs(p) <= 1e-14 * std::max(1.0, std::abs(b * b))) {
      raw = {-shift, -shift, -shift};
    } else {
      const double u = std::cbrt(-q / 2.0);
      raw = {2.0 * u - shift, -u - shift, -u - shift};
    }
  } else if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + sq);
    const double v = std::cbrt(-q / 2.0 - sq);
    raw = {u + v - shift};
  } else {
    const double r = std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (2.0 * p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    constexpr double kTwoPi = 6.283185307179586;
    for (int k = 0; k < 3; ++k) raw.push_back(2.0 * r * std::cos(phi - kTwoPi * k / 3.0) - shift);
  }

  for (double& x : raw) x = detail::polish_root(coeffs, x);
  std::sort(raw.begin(), raw.end());

  std::vector<CubicRoot> roots;
  const double merge = 1e-7 * std::max(1.0, std::abs(raw.back()));
  for (double x : raw) {
    if (!roots.empty() && std::abs(roots.back().value - x) <= merge && raw.size() == 3 &&
        std::abs(disc) <= 1e-14 * scale * scale) {
      ++roots.back().multiplicity;
    } else {
      roots.push_back({x, 1});
    }
  }
  return roots;
}

// ---------------------------------------------------------------------------
// Fixed points of complex maps

struct FixedPointConfig {
  double tol = 1e-10;
  int max_newton = 80;
  int max_damped = 400;
  double damping = 0.5;
};

namespace detail {

template <typename Map>
bool try_eval(const Map& map, Complex x, Complex& out) {
  try {
    out = map(x);
  } catch (const Error&) {
    return false;
  }
  return is_finite(out);
}

/// Newton on r(x) = map(x) - x viewed as a map R^2 -> R^2, with a
/// finite-difference Jacobian and backtracking.
template <typename Map>
bool newton_refine(const Map& map, Complex& x, const FixedPointConfig& cfg) {
  Complex fx;
  if (!try_eval(map, x, fx)) return false;
  Complex r = fx - x;
  for (int it = 0; it < cfg.max_newton; ++it) {
    if (std::abs(r) <= 0.01 * cfg.tol) return true;
    const double h = 1e-7 * std::max(1.0, std::abs(x));
    Complex fr, fi;
    if (!try_eval(map, x + Complex{h, 0.0}, fr) || !try_eval(map, x + Complex{0.0, h}, fi)) return false;
    const Complex dr = (fr - (x + Complex{h, 0.0}) - r) / h;  // d r / d Re x
    const Complex di = (fi - (x + Complex{0.0, h}) - r) / h;  // d r / d Im x
    const double j00 = dr.real(), j01 = di.real(), j10 = dr.imag(), j11 = di.imag();
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0 || !std::isfinite(det)) return false;
    const double sx = -(j11 * r.real() - j01 * r.imag()) / det;
    const double sy = -(-j10 * r.real() + j00 * r.imag()) / det;
    Complex step{sx, sy};

    double lambda = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls) {
      const Complex trial = x + lambda * step;
      Complex ft;
      if (try_eval(map, trial, ft)) {
        const Complex rt = ft - trial;
        if (std::abs(rt) < std::abs(r)) {
          x = trial;
          r = rt;
          improved = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!improved) return std::abs(r) <= cfg.tol;
  }
  return std::abs(r) <= cfg.tol;
}

}  // namespace detail

/// Distinct fixed points of `map` reachable from the seeds, ordered by modulus.
/// Points closer than 10 * tol are merged. Throws NoneFound if every seed fails.
template <typename Map>
std::vector<Complex> find_fixed_points(const Map& map, const std::vector<Complex>& seeds,
                                       const FixedPointConfig& cfg = {}) {
  std::vector<Complex> found;
  auto accept = [&](Complex x) {
    Complex fx;
    if (!detail::try_eval(map, x, fx) || std::abs(fx - x) > cfg.tol) return;
    for (const Complex& y : found)
      if (std::abs(y - x) <= 10.0 * cfg.tol) return;
    found.push_back(x);
  };

  for (Complex x : seeds) {
    if (!is_finite(x)) continue;
    Complex trial = x;
    if (detail::newton_refine(map, trial, cfg)) {
      accept(trial);
      continue;
    }
    // Damped iteration pulls the seed into an attracting basin, then Newton finishes.
    Complex y = x;
    bool ok = true;
    for (int it = 0; it < cfg.max_damped && ok; ++it) {
      Complex fy;
      ok = detail::try_eval(map, y, fy);
      if (!ok) break;
      const Complex next = (1.0 - cfg.damping) * y + cfg.damping * fy;
      const bool done = std::abs(fy - y) <= cfg.tol;
      y = next;
      if (done) break;
    }
    if (!ok) continue;
    if (detail::newton_refine(map, y, cfg)) accept(y);
  }

  if (found.empty()) throw Error(ErrorCode::NoneFound, "no seed converged to a fixed point");
  std::sort(found.begin(), found.end(), [](Complex a, Complex b) {
    if (std::norm(a) != std::norm(b)) return std::norm(a) < std::norm(b);
    return a.real() < b.real();
  });
  return found;
}

}  // namespace ddbh
