// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace spdecov {

/// Dense symmetric matrix. The stored entries are exactly symmetric;
/// the checked constructor rejects anything else.
class SymMatrix {
 public:
  SymMatrix() = default;
  /// Throws DomainError unless m is square and bitwise symmetric.
  explicit SymMatrix(Eigen::MatrixXd m);

  /// Builds (m + m^T)/2; for results that are symmetric up to roundoff.
  static SymMatrix symmetrized(const Eigen::MatrixXd& m);
  static SymMatrix zero(Eigen::Index n);
  static SymMatrix diagonal(const Eigen::VectorXd& d);

  Eigen::Index n() const { return mat_.rows(); }
  const Eigen::MatrixXd& m() const { return mat_; }

 private:
  Eigen::MatrixXd mat_;
};

/// Tall dense factor (n rows, c columns, c >= 1).
class TallMatrix {
 public:
  TallMatrix() = default;
  explicit TallMatrix(Eigen::MatrixXd m);

  Eigen::Index rows() const { return mat_.rows(); }
  Eigen::Index cols() const { return mat_.cols(); }
  const Eigen::MatrixXd& m() const { return mat_; }

 private:
  Eigen::MatrixXd mat_;
};

/// Enclosing interval [a,b] of a stable symmetric spectrum, a <= b < 0.
struct SpectralInterval {
  double a;  ///< most negative eigenvalue
  double b;  ///< least negative eigenvalue
  double kappa() const { return a / b; }  ///< condition number |a|/|b|
};

struct EigDecomposition {
  Eigen::VectorXd eigenvalues;   ///< ascending
  Eigen::MatrixXd eigenvectors;  ///< orthonormal columns
};

/// Eigendecomposition of a symmetric matrix, eigenvalues ascending.
EigDecomposition sym_eig(const SymMatrix& m);

/// Solves (A + alpha I) H = W for negative definite A and alpha < 0 by a
/// Cholesky factorization of -(A + alpha I). Uses a banded factorization
/// when the bandwidth of A is at most 5, a dense one otherwise. Throws
/// SolverError("shifted operator not definite") on factorization breakdown.
TallMatrix shifted_solve(const SymMatrix& a, double alpha, const TallMatrix& w);

/// max_i |lambda_i(M)| by power iteration with a deterministic start.
double spectral_norm(const SymMatrix& m);

/// Spectral norm of a tall factor via its c x c Gram matrix.
double spectral_norm(const TallMatrix& m);

/// Stationary solution V of A V + V A^T + B B^T = 0 for symmetric negative
/// definite A, computed in the eigenbasis of A: with C = S^T B B^T S,
/// X_ij = -C_ij/(lambda_i + lambda_j), V = S X S^T. Throws
/// StabilityError("operator not stable") if any eigenvalue is >= 0.
SymMatrix dense_lyapunov(const SymMatrix& a, const TallMatrix& b);

struct TruncatedFactor {
  Eigen::VectorXd singular_values;  ///< of V = Z Z^T, descending
  TallMatrix factor;                ///< rank-r factor of the best approximation
};

/// Best rank-r approximation of V = Z Z^T through the Gram matrix Z^T Z.
/// Requires 1 <= r <= cols(Z).
TruncatedFactor truncated_svd_of_factor(const TallMatrix& z, int r);

/// Extreme eigenvalues of a stable symmetric operator.
SpectralInterval spectral_interval(const SymMatrix& a);

}  // namespace spdecov
