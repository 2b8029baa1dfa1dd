#pragma once

// Truncated Fock-space algebra for a single bosonic mode.

#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "ddbh/error.hpp"
#include "ddbh/numerics.hpp"

namespace ddbh {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense operator on span{|0>, ..., |n_max>}.
class FockOperator {
 public:
  explicit FockOperator(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 2)
      throw Error(ErrorCode::InvalidArgument, "Fock operator must be square with dim >= 2");
    if (!entries_.allFinite()) throw Error(ErrorCode::InvalidArgument, "Fock operator has non-finite entries");
  }

  int dim() const { return static_cast<int>(entries_.rows()); }
  int n_max() const { return dim() - 1; }
  const Matrix& matrix() const { return entries_; }
  FockOperator adjoint() const { return FockOperator(entries_.adjoint()); }

  friend FockOperator operator*(const FockOperator& a, const FockOperator& b) {
    return FockOperator(a.entries_ * b.entries_);
  }

 private:
  Matrix entries_;
};

inline FockOperator annihilation(int n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  Matrix b = Matrix::Zero(n_max + 1, n_max + 1);
  for (int k = 1; k <= n_max; ++k) b(k - 1, k) = std::sqrt(static_cast<double>(k));
  return FockOperator(std::move(b));
}

inline FockOperator number_operator(int n_max) {
  const FockOperator b = annihilation(n_max);
  return b.adjoint() * b;
}

struct DensityMatrixTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double positivity = -1e-8;  // smallest admissible eigenvalue
};

/// Hermitian, unit-trace, (nearly) positive matrix on a truncated Fock space.
/// Construction validates; `repaired` symmetrizes and renormalizes first.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries, const DensityMatrixTolerances& tol = {}) : entries_(std::move(entries)) {
    validate(tol);
  }

  /// (rho + rho^dagger)/2 followed by trace normalization.
  static DensityMatrix repaired(const Matrix& raw, const DensityMatrixTolerances& tol = {}) {
    Matrix h = 0.5 * (raw + raw.adjoint());
    const Complex tr = h.trace();
    if (std::abs(tr) == 0.0 || !is_finite(tr))
      throw Error(ErrorCode::InvalidArgument, "cannot normalize a traceless matrix");
    h /= tr.real();
    return DensityMatrix(std::move(h), tol);
  }

  int dim() const { return static_cast<int>(entries_.rows()); }
  int n_max() const { return dim() - 1; }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(int n, int m) const { return entries_(n, m); }
  double population(int k) const { return entries_(k, k).real(); }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

 private:
  void validate(const DensityMatrixTolerances& tol) const {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 2)
      throw Error(ErrorCode::InvalidArgument, "density matrix must be square with dim >= 2");
    if (!entries_.allFinite()) throw Error(ErrorCode::InvalidArgument, "density matrix has non-finite entries");
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > tol.hermiticity)
      throw Error(ErrorCode::InvalidArgument, "density matrix is not hermitian");
    if (std::abs(entries_.trace() - 1.0) > tol.trace)
      throw Error(ErrorCode::InvalidArgument, "density matrix trace differs from one");
    if (min_eigenvalue() < tol.positivity)
      throw Error(ErrorCode::InvalidArgument, "density matrix has a negative eigenvalue");
  }

  Matrix entries_;
};

struct Observables {
  double n_mean = 0.0;
  std::optional<double> g2;  // empty when n_mean is below the definition threshold
  Complex coherence{0.0, 0.0};

  double g2_or_throw() const {
    if (!g2) throw Error(ErrorCode::G2Undefined, "g2 undefined at vanishing density");
    return *g2;
  }
};

inline constexpr double kG2DensityThreshold = 1e-12;

/// n = Tr(b^dagger b rho), <b> = Tr(b rho), g2 = <b^dagger b^dagger b b>/n^2.
/// Only the populations and the first off-diagonal are needed.
inline Observables observables_from(const DensityMatrix& rho) {
  Observables obs;
  double n = 0.0, nn1 = 0.0;
  Complex b{0.0, 0.0};
  for (int k = 0; k < rho.dim(); ++k) {
    const double p = rho.population(k);
    n += k * p;
    nn1 += static_cast<double>(k) * (k - 1) * p;
    if (k >= 1) b += std::sqrt(static_cast<double>(k)) * rho(k, k - 1);
  }
  obs.n_mean = n;
  obs.coherence = b;
  if (n >= kG2DensityThreshold) obs.g2 = nn1 / (n * n);
  return obs;
}

/// Normalized truncated coherent state |alpha><alpha|.
inline DensityMatrix coherent_rho(Complex alpha, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  if (std::norm(alpha) > n_max / 4.0)
    throw Error(ErrorCode::TruncationTooSmall, "|alpha|^2 exceeds n_max/4");
  Vector psi(n_max + 1);
  psi(0) = 1.0;
  for (int k = 1; k <= n_max; ++k) psi(k) = psi(k - 1) * alpha / std::sqrt(static_cast<double>(k));
  psi.normalize();
  return DensityMatrix::repaired(psi * psi.adjoint());
}

/// Diagonal state with the given (not necessarily normalized) populations.
inline DensityMatrix diagonal_rho(const std::vector<double>& populations) {
  double total = 0.0;
  for (double p : populations) total += p;
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(populations.size()), static_cast<Eigen::Index>(populations.size()));
  for (std::size_t k = 0; k < populations.size(); ++k) m(k, k) = populations[k] / total;
  return DensityMatrix(std::move(m));
}

}  // namespace ddbh
