#pragma once

// Brute-force steady state of the single-site master equation
//   d rho/dt = -i[H, rho] + (gamma/2)(2 b rho b^dagger - b^dagger b rho - rho b^dagger b)
// with H = -dw b^dagger b + (U/2) b^dagger b^dagger b b + F' b^dagger + F'^* b.
// Density matrices are vectorized row-major: vec(rho)[n*d + m] = rho(n, m),
// so vec(A rho B) = (A kron B^T) vec(rho).

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "ddbh/fock.hpp"
#include "ddbh/params.hpp"

namespace ddbh::oracle {

/// Mean-field single-site Hamiltonian with the given drive.
inline Matrix hamiltonian(const SystemParams& p, Complex f_eff, int n_max) {
  const Matrix b = annihilation(n_max).matrix();
  const Matrix bd = b.adjoint();
  const Matrix num = bd * b;
  return -p.delta_omega * num + 0.5 * p.u * (bd * bd * b * b) + f_eff * bd + std::conj(f_eff) * b;
}

class Liouvillian {
 public:
  Liouvillian(int dim, Matrix entries) : dim_(dim), entries_(std::move(entries)) {}

  int dim() const { return dim_; }
  int n_max() const { return dim_ - 1; }
  const Matrix& matrix() const { return entries_; }

 private:
  int dim_;
  Matrix entries_;
};

/// Row-major vectorization helpers.
inline Vector vectorize(const Matrix& rho) {
  const int d = static_cast<int>(rho.rows());
  Vector v(d * d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) v(n * d + m) = rho(n, m);
  return v;
}

inline Matrix unvectorize(const Vector& v, int d) {
  Matrix rho(d, d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) rho(n, m) = v(n * d + m);
  return rho;
}

/// Superoperator of the commutator-free form A rho B in the row-major convention.
inline Matrix left_right(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, Matrix(b.transpose())).eval();
}

inline Liouvillian build_liouvillian(const SystemParams& p, Complex f_eff, int n_max) {
  p.check();
  if (n_max < 2) throw Error(ErrorCode::InvalidArgument, "oracle needs n_max >= 2");
  const int d = n_max + 1;
  const Matrix id = Matrix::Identity(d, d);
  const Matrix h = hamiltonian(p, f_eff, n_max);
  const Matrix b = annihilation(n_max).matrix();
  const Matrix bd = b.adjoint();
  const Matrix num = bd * b;
  const Complex i{0.0, 1.0};
  Matrix l = -i * (left_right(h, id) - left_right(id, h));
  l += 0.5 * p.gamma * (2.0 * left_right(b, bd) - left_right(num, id) - left_right(id, num));
  return Liouvillian(d, std::move(l));
}

/// Row vector t with t . vec(rho) = Tr(rho).
inline Eigen::RowVectorXcd trace_functional(int d) {
  Eigen::RowVectorXcd t = Eigen::RowVectorXcd::Zero(d * d);
  for (int k = 0; k < d; ++k) t(k * d + k) = 1.0;
  return t;
}

struct SteadyStateConfig {
  double residual_tol = 1e-10;     // on ||L vec(rho)|| relative to max|L_ij|
  double hermiticity_tol = 1e-9;   // before repair
  double min_rcond = 1e-13;        // below this the kernel is treated as degenerate
};

struct SteadyState {
  DensityMatrix rho;
  double residual = 0.0;
  double hermiticity_deviation = 0.0;
  int n_max() const { return rho.n_max(); }
};

/// Kernel of L by a linear solve in which the first equation is replaced by Tr(rho) = 1.
inline SteadyState steady_state_detailed(const Liouvillian& liou, const SteadyStateConfig& cfg = {}) {
  const int d = liou.dim();
  const int d2 = d * d;
  const Matrix& l = liou.matrix();
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());

  Matrix a = l / scale;
  a.row(0) = trace_functional(d);
  Vector rhs = Vector::Zero(d2);
  rhs(0) = 1.0;
  Eigen::PartialPivLU<Matrix> lu(a);
  if (!(lu.rcond() > cfg.min_rcond))
    throw Error(ErrorCode::DegenerateKernel, "Liouvillian kernel is not one-dimensional (rcond " +
                                                 std::to_string(lu.rcond()) + ")");
  const Vector v = lu.solve(rhs);
  const Matrix raw = unvectorize(v, d);

  const double herm = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
  if (herm > cfg.hermiticity_tol)
    throw Error(ErrorCode::DegenerateKernel, "kernel vector is not hermitian (" + std::to_string(herm) + ")");
  DensityMatrix rho = DensityMatrix::repaired(raw);
  const double residual = (l * vectorize(rho.matrix())).norm() / scale;
  if (residual > cfg.residual_tol)
    throw Error(ErrorCode::DegenerateKernel, "steady-state residual " + std::to_string(residual));
  return SteadyState{std::move(rho), residual, herm};
}

inline DensityMatrix steady_state(const Liouvillian& liou, const SteadyStateConfig& cfg = {}) {
  return steady_state_detailed(liou, cfg).rho;
}

/// Cross-check path: eigenvector of the eigenvalue of smallest modulus.
inline DensityMatrix steady_state_eigen(const Liouvillian& liou) {
  Eigen::ComplexEigenSolver<Matrix> es(liou.matrix());
  if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "Liouvillian diagonalization failed");
  Eigen::Index best = 0;
  es.eigenvalues().cwiseAbs().minCoeff(&best);
  const Vector v = es.eigenvectors().col(best);
  Matrix raw = unvectorize(v, liou.dim());
  raw /= raw.trace();
  return DensityMatrix::repaired(raw);
}

struct AdaptiveConfig {
  double leak_tol = 1e-12;  // bound on the top Fock population
  int n_min = 2;
  int n_max_ceiling = 60;
  int coarse_step = 4;
  SteadyStateConfig steady{};
};

/// Steady state at the smallest truncation whose top population is below leak_tol.
inline SteadyState adaptive_steady_state(const SystemParams& p, Complex f_eff, const AdaptiveConfig& cfg = {}) {
  if (!(cfg.leak_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "leak_tol must be > 0");
  auto solve_at = [&](int n_max) { return steady_state_detailed(build_liouvillian(p, f_eff, n_max), cfg.steady); };
  auto leaks = [&](const SteadyState& s) { return s.rho.population(s.rho.n_max()) >= cfg.leak_tol; };

  int last_bad = cfg.n_min - 1;
  int n = cfg.n_min;
  for (;;) {
    if (n > cfg.n_max_ceiling)
      throw Error(ErrorCode::TruncationCeiling,
                  "steady state needs n_max > " + std::to_string(cfg.n_max_ceiling));
    SteadyState s = solve_at(n);
    if (!leaks(s)) {
      // Refine upward from the last failing truncation.
      for (int m = last_bad + 1; m < n; ++m) {
        SteadyState t = solve_at(m);
        if (!leaks(t)) return t;
      }
      return s;
    }
    last_bad = n;
    n += cfg.coarse_step;
  }
}

}  // namespace ddbh::oracle
