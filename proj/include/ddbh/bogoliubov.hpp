#pragma once

// Linearized fluctuations around a homogeneous mean-field steady state.
//
// In the i d/dt convention a fluctuation delta rho_k evolves with
//   K_k = L_mf + t_k C,
//   L_mf[x] = [H_mf, x] - (i gamma/2)(2 b x b^dagger - b^dagger b x - x b^dagger b),
//   C[x]    = -(Tr(b x) [b^dagger, rho_mf] + Tr(b^dagger x) [b, rho_mf]).
// The generator -i K_k maps hermitian matrices to hermitian matrices, so its
// eigenvalues are computed from a real matrix in an orthonormal hermitian basis.
// The trace functional is a left null vector for every k; restricting to the
// traceless subspace removes that steady-state direction exactly.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ddbh/gross_pitaevskii.hpp"
#include "ddbh/lindblad.hpp"
#include "ddbh/solution.hpp"
#include "ddbh/spectrum.hpp"

namespace ddbh::bogoliubov {

using RealMatrix = Eigen::MatrixXd;

struct FluctuationConfig {
  oracle::AdaptiveConfig truncation{};  // chooses n_max for rho_mf
  int n_max = 0;                        // > 0 forces a fixed truncation
  DispersionConvention dispersion = DispersionConvention::Consistent;
  double stability_margin = 1e-8;
};

/// Mean-field state and the two k-independent pieces of the fluctuation operator.
struct FluctuationModel {
  SystemParams params;
  DensityMatrix rho_mf;
  Matrix l_mf;      // i d/dt form
  Matrix coupling;  // C, multiplied by t_k
  DispersionConvention dispersion = DispersionConvention::Consistent;

  int dim() const { return rho_mf.dim(); }
  Matrix op(Momentum k) const { return l_mf + hopping_dispersion(params, k, dispersion) * coupling; }
  Matrix op_at(double t_k) const { return l_mf + t_k * coupling; }
};

/// Row vector r with r . vec(x) = Tr(a x) (row-major vectorization).
inline Eigen::RowVectorXcd trace_against(const Matrix& a) {
  const int d = static_cast<int>(a.rows());
  Eigen::RowVectorXcd r(d * d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) r(n * d + m) = a(m, n);
  return r;
}

inline FluctuationModel make_model(const SystemParams& p, const MeanFieldSolution& sol, const FluctuationConfig& cfg = {}) {
  DensityMatrix rho = cfg.n_max > 0 ? oracle::steady_state(oracle::build_liouvillian(p, sol.f_eff, cfg.n_max))
                                    : oracle::adaptive_steady_state(p, sol.f_eff, cfg.truncation).rho;
  const int n_max = rho.n_max();
  const Complex i{0.0, 1.0};
  Matrix l_mf = i * oracle::build_liouvillian(p, sol.f_eff, n_max).matrix();

  const Matrix b = annihilation(n_max).matrix();
  const Matrix bd = b.adjoint();
  const Matrix& r = rho.matrix();
  const Vector comm_bd = oracle::vectorize(bd * r - r * bd);
  const Vector comm_b = oracle::vectorize(b * r - r * b);
  Matrix coupling = -(comm_bd * trace_against(b) + comm_b * trace_against(bd));
  return FluctuationModel{p, std::move(rho), std::move(l_mf), std::move(coupling), cfg.dispersion};
}

/// Fluctuation operator (i d/dt form) at momentum k, as a dense matrix on vec(delta rho).
inline Matrix build_fluctuation_operator(const SystemParams& p, const MeanFieldSolution& sol, Momentum k,
                                         const FluctuationConfig& cfg = {}) {
  return make_model(p, sol, cfg).op(k);
}

namespace detail {

struct BasisEntry {
  int index;      // row-major vec index
  Complex coeff;  // component of the basis vector there
};

/// Orthonormal hermitian basis: E_kk, then (E_nm + E_mn)/sqrt2 and i(E_nm - E_mn)/sqrt2 for n < m.
/// The diagonal elements come first, in order k = 0..d-1.
inline std::vector<std::vector<BasisEntry>> hermitian_basis(int d) {
  std::vector<std::vector<BasisEntry>> basis;
  const double s = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < d; ++k) basis.push_back({{k * d + k, 1.0}});
  for (int n = 0; n < d; ++n)
    for (int m = n + 1; m < d; ++m) {
      basis.push_back({{n * d + m, s}, {m * d + n, s}});
      basis.push_back({{n * d + m, Complex{0.0, s}}, {m * d + n, Complex{0.0, -s}}});
    }
  return basis;
}

}  // namespace detail

/// Real matrix of the generator -i K in the hermitian basis, restricted to the
/// traceless subspace (basis E_kk - E_00 for k >= 1 plus all off-diagonal elements).
inline RealMatrix traceless_generator(const Matrix& k_op) {
  const int d2 = static_cast<int>(k_op.rows());
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d2))));
  const auto basis = detail::hermitian_basis(d);
  const Matrix gen = Complex{0.0, -1.0} * k_op;

  Matrix gb(d2, d2);
  for (int j = 0; j < d2; ++j) {
    gb.col(j).setZero();
    for (const auto& e : basis[j]) gb.col(j) += e.coeff * gen.col(e.index);
  }
  RealMatrix full(d2, d2);
  for (int i = 0; i < d2; ++i) {
    Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(d2);
    for (const auto& e : basis[i]) row += std::conj(e.coeff) * gb.row(e.index);
    full.row(i) = row.real();
  }

  RealMatrix restricted(d2 - 1, d2 - 1);
  for (int i = 1; i < d2; ++i)
    for (int j = 1; j < d2; ++j) {
      double v = full(i, j);
      if (j < d) v -= full(i, 0);
      restricted(i - 1, j - 1) = v;
    }
  return restricted;
}

/// Eigenfrequencies omega = i lambda of the non-steady modes at hopping amplitude t_k.
inline std::vector<Complex> eigenfrequencies(const FluctuationModel& model, double t_k) {
  const RealMatrix g = traceless_generator(model.op_at(t_k));
  Eigen::EigenSolver<RealMatrix> es(g, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "fluctuation diagonalization failed");
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(g.rows()));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(Complex{0.0, 1.0} * es.eigenvalues()(i));
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    if (std::abs(a.imag()) != std::abs(b.imag())) return std::abs(a.imag()) < std::abs(b.imag());
    return a.real() < b.real();
  });
  return out;
}

enum class BranchSelector {
  SmallestDecay,  // the two modes with the smallest |Im omega|
  ClosestToGP,    // the modes nearest to the two coherent-field frequencies
};

struct SpectrumOptions {
  BranchSelector selector = BranchSelector::SmallestDecay;
  gp::GPState gp_reference{};  // used by ClosestToGP
};

inline std::array<Complex, 2> ordered_pair(Complex a, Complex b) {
  if (b.real() < a.real() || (b.real() == a.real() && b.imag() < a.imag())) std::swap(a, b);
  return {a, b};
}

inline ExcitationSpectrum spectrum(const FluctuationModel& model, const std::vector<Momentum>& k_path,
                                   const SpectrumOptions& opt = {}) {
  ExcitationSpectrum spec;
  spec.k_points = k_path;
  std::map<double, std::vector<Complex>> cache;  // keyed on t_k
  for (const Momentum& k : k_path) {
    const double tk = hopping_dispersion(model.params, k, model.dispersion);
    auto it = cache.find(tk);
    if (it == cache.end()) it = cache.emplace(tk, eigenfrequencies(model, tk)).first;
    const std::vector<Complex>& w = it->second;
    if (w.size() < 2) throw Error(ErrorCode::EigenFailure, "fewer than two fluctuation modes");
    spec.branches.push_back(w);

    if (opt.selector == BranchSelector::SmallestDecay) {
      spec.low_energy.push_back(ordered_pair(w[0], w[1]));
    } else {
      const ExcitationSpectrum ref = gp::gp_spectrum(model.params, opt.gp_reference, {k}, model.dispersion);
      std::array<Complex, 2> pick{};
      std::size_t used = w.size();
      for (int br = 0; br < 2; ++br) {
        std::size_t best = 0;
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < w.size(); ++i) {
          if (i == used) continue;
          const double dd = std::abs(w[i] - ref.low_energy[0][br]);
          if (dd < dist) { dist = dd; best = i; }
        }
        pick[br] = w[best];
        used = best;
      }
      spec.low_energy.push_back(ordered_pair(pick[0], pick[1]));
    }
  }
  return spec;
}

inline ExcitationSpectrum spectrum(const SystemParams& p, const MeanFieldSolution& sol, const std::vector<Momentum>& k_path,
                                   const FluctuationConfig& cfg = {}, const SpectrumOptions& opt = {}) {
  return spectrum(make_model(p, sol, cfg), k_path, opt);
}

/// Distinct hopping amplitudes of a momentum set, largest first (k = 0 leads).
inline std::vector<double> distinct_dispersion(const FluctuationModel& model, const std::vector<Momentum>& k_grid) {
  std::vector<double> ts;
  for (const Momentum& k : k_grid) ts.push_back(hopping_dispersion(model.params, k, model.dispersion));
  std::sort(ts.begin(), ts.end(), std::greater<>());
  ts.erase(std::unique(ts.begin(), ts.end(), [](double a, double b) { return std::abs(a - b) <= 1e-14 * (1.0 + std::abs(a)); }),
           ts.end());
  return ts;
}

inline double growth_rate_at(const FluctuationModel& model, double t_k) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Complex& w : eigenfrequencies(model, t_k)) worst = std::max(worst, w.imag());  // Re(lambda) = Im(omega)
  return worst;
}

/// Largest growth rate max Re(lambda) of the generator over the given momenta.
inline double max_growth_rate(const FluctuationModel& model, const std::vector<Momentum>& k_grid) {
  double worst = -std::numeric_limits<double>::infinity();
  for (double t : distinct_dispersion(model, k_grid)) worst = std::max(worst, growth_rate_at(model, t));
  return worst;
}

inline StabilityVerdict verdict_from_growth(double growth, double margin) {
  if (growth < -margin) return StabilityVerdict::Stable;
  if (growth > margin) return StabilityVerdict::Unstable;
  return StabilityVerdict::Undetermined;
}

/// Stable iff every non-steady mode decays at every momentum of the grid.
/// Stops at the first momentum with a growing mode.
inline StabilityVerdict stability(const SystemParams& p, const MeanFieldSolution& sol, const std::vector<Momentum>& k_grid,
                                  const FluctuationConfig& cfg = {}) {
  const FluctuationModel model = make_model(p, sol, cfg);
  double worst = -std::numeric_limits<double>::infinity();
  for (double t : distinct_dispersion(model, k_grid)) {
    worst = std::max(worst, growth_rate_at(model, t));
    if (worst > cfg.stability_margin) break;
  }
  return verdict_from_growth(worst, cfg.stability_margin);
}

}  // namespace ddbh::bogoliubov
