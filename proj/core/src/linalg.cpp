// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#include "spdecov/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "spdecov/errors.hpp"

namespace spdecov {

namespace {

// 64-bit mix (splitmix64 finalizer); used for the deterministic start vector.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Eigen::Index bandwidth(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  Eigen::Index bw = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = n - 1; i > j; --i) {
      if (m(i, j) != 0.0) {
        bw = std::max(bw, i - j);
        break;
      }
    }
  }
  return bw;
}

// In-place banded Cholesky M = L L^T for SPD M with bandwidth bw.
// band(i, d) stores M(i, i-d), d = 0..bw. Throws on non-positive pivots.
void banded_cholesky(std::vector<double>& band, Eigen::Index n, Eigen::Index bw) {
  auto at = [&](Eigen::Index i, Eigen::Index d) -> double& {
    return band[static_cast<std::size_t>(i * (bw + 1) + d)];
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = at(j, 0);
    for (Eigen::Index d = 1; d <= std::min(bw, j); ++d) {
      diag -= at(j, d) * at(j, d);
    }
    if (!(diag > 0.0)) {
      throw SolverError("shifted operator not definite");
    }
    at(j, 0) = std::sqrt(diag);
    for (Eigen::Index i = j + 1; i <= std::min(n - 1, j + bw); ++i) {
      double v = at(i, i - j);
      for (Eigen::Index d = 1; d <= bw - (i - j); ++d) {
        if (j >= d) v -= at(i, i - j + d) * at(j, d);
      }
      at(i, i - j) = v / at(j, 0);
    }
  }
}

void banded_solve(const std::vector<double>& band, Eigen::Index n,
                  Eigen::Index bw, Eigen::MatrixXd& rhs) {
  auto at = [&](Eigen::Index i, Eigen::Index d) -> double {
    return band[static_cast<std::size_t>(i * (bw + 1) + d)];
  };
  for (Eigen::Index c = 0; c < rhs.cols(); ++c) {
    // forward L y = b
    for (Eigen::Index i = 0; i < n; ++i) {
      double v = rhs(i, c);
      for (Eigen::Index d = 1; d <= std::min(bw, i); ++d) {
        v -= at(i, d) * rhs(i - d, c);
      }
      rhs(i, c) = v / at(i, 0);
    }
    // backward L^T x = y
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      double v = rhs(i, c);
      for (Eigen::Index d = 1; d <= std::min(bw, n - 1 - i); ++d) {
        v -= at(i + d, d) * rhs(i + d, c);
      }
      rhs(i, c) = v / at(i, 0);
    }
  }
}

}  // namespace

SymMatrix::SymMatrix(Eigen::MatrixXd m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols()) {
    throw DomainError("SymMatrix: matrix must be square");
  }
  for (Eigen::Index j = 0; j < mat_.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < mat_.rows(); ++i) {
      if (mat_(i, j) != mat_(j, i)) {
        throw DomainError("SymMatrix: entries are not symmetric");
      }
    }
  }
}

SymMatrix SymMatrix::symmetrized(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw DomainError("SymMatrix::symmetrized: matrix must be square");
  }
  Eigen::MatrixXd s = 0.5 * (m + m.transpose());
  // Make the two triangles bitwise equal.
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < s.rows(); ++i) {
      s(j, i) = s(i, j);
    }
  }
  return SymMatrix(std::move(s));
}

SymMatrix SymMatrix::zero(Eigen::Index n) {
  return SymMatrix(Eigen::MatrixXd::Zero(n, n));
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
  return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

TallMatrix::TallMatrix(Eigen::MatrixXd m) : mat_(std::move(m)) {
  if (mat_.cols() < 1 || mat_.rows() < 1) {
    throw DomainError("TallMatrix: need at least one row and one column");
  }
}

EigDecomposition sym_eig(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.m());
  if (es.info() != Eigen::Success) {
    throw SolverError("sym_eig: eigendecomposition failed");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

TallMatrix shifted_solve(const SymMatrix& a, double alpha, const TallMatrix& w) {
  if (a.n() != w.rows()) {
    throw DomainError("shifted_solve: dimension mismatch");
  }
  const Eigen::Index n = a.n();
  Eigen::MatrixXd spd = -(a.m() + alpha * Eigen::MatrixXd::Identity(n, n));
  const Eigen::Index bw = bandwidth(spd);
  if (bw <= 5) {
    std::vector<double> band(static_cast<std::size_t>(n * (bw + 1)), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index d = 0; d <= std::min(bw, i); ++d) {
        band[static_cast<std::size_t>(i * (bw + 1) + d)] = spd(i, i - d);
      }
    }
    banded_cholesky(band, n, bw);
    Eigen::MatrixXd rhs = -w.m();
    banded_solve(band, n, bw, rhs);
    return TallMatrix(std::move(rhs));
  }
  Eigen::LLT<Eigen::MatrixXd> llt(spd);
  if (llt.info() != Eigen::Success) {
    throw SolverError("shifted operator not definite");
  }
  return TallMatrix(llt.solve(-w.m()));
}

double spectral_norm(const SymMatrix& m) {
  const Eigen::Index n = m.n();
  if (n == 0) return 0.0;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = 1.0 + static_cast<double>(mix64(static_cast<std::uint64_t>(i))) /
                     static_cast<double>(UINT64_MAX);
  }
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXd mv = m.m().selfadjointView<Eigen::Lower>() * v;
    const double nrm = mv.norm();
    if (nrm == 0.0) return 0.0;
    const bool settled = std::abs(nrm - est) <= 1e-10 * std::max(nrm, 1e-300);
    est = nrm;
    v = mv / nrm;
    if (settled && it >= 2) break;
  }
  return est;
}

double spectral_norm(const TallMatrix& m) {
  Eigen::MatrixXd gram = m.m().transpose() * m.m();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double top = es.eigenvalues().cwiseMax(0.0).maxCoeff();
  return std::sqrt(top);
}

SymMatrix dense_lyapunov(const SymMatrix& a, const TallMatrix& b) {
  if (a.n() != b.rows()) {
    throw DomainError("dense_lyapunov: dimension mismatch");
  }
  const EigDecomposition eig = sym_eig(a);
  if (eig.eigenvalues.maxCoeff() >= 0.0) {
    throw StabilityError("operator not stable");
  }
  const Eigen::MatrixXd f = eig.eigenvectors.transpose() * b.m();
  Eigen::MatrixXd x = f * f.transpose();
  const Eigen::Index n = a.n();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i, j) = -x(i, j) / (eig.eigenvalues(i) + eig.eigenvalues(j));
    }
  }
  Eigen::MatrixXd v = eig.eigenvectors * x * eig.eigenvectors.transpose();
  return SymMatrix::symmetrized(v);
}

TruncatedFactor truncated_svd_of_factor(const TallMatrix& z, int r) {
  const Eigen::Index c = z.cols();
  if (r < 1 || r > c) {
    throw DomainError("truncated_svd_of_factor: rank out of range");
  }
  Eigen::MatrixXd gram = z.m().transpose() * z.m();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success) {
    throw SolverError("truncated_svd_of_factor: Gram eigendecomposition failed");
  }
  // Ascending from Eigen; flip to descending.
  Eigen::VectorXd sv(c);
  Eigen::MatrixXd q(c, c);
  for (Eigen::Index i = 0; i < c; ++i) {
    sv(i) = std::max(es.eigenvalues()(c - 1 - i), 0.0);
    q.col(i) = es.eigenvectors().col(c - 1 - i);
  }
  TruncatedFactor out;
  out.singular_values = sv;
  out.factor = TallMatrix(z.m() * q.leftCols(r));
  return out;
}

SpectralInterval spectral_interval(const SymMatrix& a) {
  const EigDecomposition eig = sym_eig(a);
  const double lo = eig.eigenvalues.minCoeff();
  const double hi = eig.eigenvalues.maxCoeff();
  if (hi >= 0.0) {
    throw StabilityError("operator not stable");
  }
  return {lo, hi};
}

}  // namespace spdecov
