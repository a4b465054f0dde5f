// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "spdecov/discretize.hpp"
#include "spdecov/errors.hpp"
#include "spdecov/linalg.hpp"

using namespace spdecov;

namespace {

Eigen::MatrixXd random_symmetric(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      m(i, j) = dist(gen);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

Eigen::MatrixXd random_matrix(int n, int c, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd m(n, c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = dist(gen);
  return m;
}

}  // namespace

TEST_CASE("SymMatrix enforces exact symmetry") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0 + 1e-15, 1.0;
  CHECK_THROWS_AS(SymMatrix{bad}, DomainError);
  CHECK_NOTHROW(SymMatrix::symmetrized(bad));
  CHECK_THROWS_AS(SymMatrix{Eigen::MatrixXd::Zero(2, 3)}, DomainError);
}

TEST_CASE("TallMatrix needs a column") {
  CHECK_THROWS_AS(TallMatrix{Eigen::MatrixXd(3, 0)}, DomainError);
}

TEST_CASE("sym_eig") {
  {
    const auto eig = sym_eig(SymMatrix(Eigen::MatrixXd::Identity(3, 3)));
    for (int i = 0; i < 3; ++i) CHECK(eig.eigenvalues(i) == doctest::Approx(1.0));
  }
  {
    Eigen::VectorXd d(2);
    d << -4.0, -1.0;
    const auto eig = sym_eig(SymMatrix::diagonal(d));
    CHECK(eig.eigenvalues(0) == doctest::Approx(-4.0));
    CHECK(eig.eigenvalues(1) == doctest::Approx(-1.0));
    CHECK(std::abs(std::abs(eig.eigenvectors(0, 0)) - 1.0) < 1e-14);
  }
  {
    const SymMatrix m(random_symmetric(50, 7));
    const auto eig = sym_eig(m);
    const double scale = spectral_norm(m);
    const Eigen::MatrixXd rec = eig.eigenvectors *
                                eig.eigenvalues.asDiagonal() *
                                eig.eigenvectors.transpose();
    CHECK((rec - m.m()).norm() <= 1e-10 * scale);
    CHECK((eig.eigenvectors.transpose() * eig.eigenvectors -
           Eigen::MatrixXd::Identity(50, 50))
              .norm() <= 1e-10);
    for (int i = 1; i < 50; ++i) CHECK(eig.eigenvalues(i) >= eig.eigenvalues(i - 1));
  }
}

TEST_CASE("shifted_solve") {
  {
    const SymMatrix a(Eigen::MatrixXd::Constant(1, 1, -2.0));
    const TallMatrix w(Eigen::MatrixXd::Constant(1, 1, 3.0));
    CHECK(shifted_solve(a, -2.0, w).m()(0, 0) == doctest::Approx(-0.75));
  }
  {
    Eigen::VectorXd d(2);
    d << -1.0, -3.0;
    Eigen::MatrixXd w(2, 1);
    w << 2.0, 4.0;
    const auto h = shifted_solve(SymMatrix::diagonal(d), -1.0, TallMatrix(w));
    CHECK(h.m()(0, 0) == doctest::Approx(-1.0));
    CHECK(h.m()(1, 0) == doctest::Approx(-1.0));
  }
  {
    // tridiagonal path (bandwidth 1) against the residual
    const SymMatrix a = build_laplacian_1d(100, 1.0);
    const TallMatrix w(random_matrix(100, 3, 11));
    const double alpha = -5.0;
    const auto h = shifted_solve(a, alpha, w);
    const Eigen::MatrixXd res =
        (a.m() + alpha * Eigen::MatrixXd::Identity(100, 100)) * h.m() - w.m();
    CHECK(res.norm() <= 1e-12 * w.m().norm());
  }
  {
    // dense path for a full matrix
    Eigen::MatrixXd full = random_symmetric(40, 3);
    full -= 100.0 * Eigen::MatrixXd::Identity(40, 40);
    const SymMatrix a(SymMatrix::symmetrized(full));
    const TallMatrix w(random_matrix(40, 2, 5));
    const auto h = shifted_solve(a, -1.0, w);
    const Eigen::MatrixXd res =
        (a.m() - Eigen::MatrixXd::Identity(40, 40)) * h.m() - w.m();
    CHECK(res.norm() <= 1e-12 * w.m().norm());
  }
  {
    // violated precondition (alpha >= |b|) makes A + alpha I indefinite
    Eigen::VectorXd d(2);
    d << -4.0, -1.0;
    const TallMatrix w(Eigen::MatrixXd::Ones(2, 1));
    CHECK_THROWS_AS(shifted_solve(SymMatrix::diagonal(d), 2.0, w), SolverError);
    Eigen::MatrixXd full = random_symmetric(40, 3);
    full -= 2.0 * Eigen::MatrixXd::Identity(40, 40);
    CHECK_THROWS_AS(
        shifted_solve(SymMatrix::symmetrized(full), 100.0, TallMatrix(random_matrix(40, 1, 1))),
        SolverError);
  }
}

TEST_CASE("spectral_norm") {
  CHECK(spectral_norm(SymMatrix::zero(4)) == 0.0);
  Eigen::VectorXd d(2);
  d << -4.0, -1.0;
  CHECK(spectral_norm(SymMatrix::diagonal(d)) == doctest::Approx(4.0).epsilon(1e-10));
  const SymMatrix m(random_symmetric(50, 21));
  const auto eig = sym_eig(m);
  const double ref = eig.eigenvalues.cwiseAbs().maxCoeff();
  CHECK(spectral_norm(m) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("dense_lyapunov") {
  {
    Eigen::VectorXd d(2);
    d << -1.0, -2.0;
    const TallMatrix b(Eigen::MatrixXd::Ones(2, 1));
    const SymMatrix v = dense_lyapunov(SymMatrix::diagonal(d), b);
    CHECK(v.m()(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(v.m()(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(v.m()(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
  }
  {
    const SymMatrix a(Eigen::MatrixXd::Constant(1, 1, -2.0));
    const TallMatrix b(Eigen::MatrixXd::Constant(1, 1, 3.0));
    CHECK(dense_lyapunov(a, b).m()(0, 0) == doctest::Approx(2.25).epsilon(1e-14));
  }
  {
    const SymMatrix a = build_laplacian_1d(50, 1.0);
    const TallMatrix b(random_matrix(50, 2, 9));
    const SymMatrix v = dense_lyapunov(a, b);
    const Eigen::MatrixXd bbt = b.m() * b.m().transpose();
    const Eigen::MatrixXd res = a.m() * v.m() + v.m() * a.m() + bbt;
    CHECK(spectral_norm(SymMatrix::symmetrized(res)) <=
          1e-10 * spectral_norm(SymMatrix::symmetrized(bbt)));
    // PSD within tolerance
    const auto eig = sym_eig(v);
    CHECK(eig.eigenvalues.minCoeff() >= -1e-10 * spectral_norm(v));
    // small-system cross-check against the Kronecker oracle
    const SymMatrix a6(random_symmetric(6, 2) -
                       20.0 * Eigen::MatrixXd::Identity(6, 6));
    const TallMatrix b6(random_matrix(6, 2, 3));
    const SymMatrix v6 = dense_lyapunov(a6, b6);
    const Eigen::MatrixXd ref = oracle::kron_lyapunov(a6.m(), b6.m());
    CHECK((v6.m() - ref).norm() <= 1e-11 * ref.norm());
  }
  {
    Eigen::VectorXd d(2);
    d << -1.0, 1.0;
    CHECK_THROWS_AS(
        dense_lyapunov(SymMatrix::diagonal(d), TallMatrix(Eigen::MatrixXd::Ones(2, 1))),
        StabilityError);
  }
  // diagonal closed form, entrywise
  {
    Eigen::VectorXd d(3);
    d << -0.5, -1.5, -4.0;
    const TallMatrix b(random_matrix(3, 2, 17));
    const SymMatrix v = dense_lyapunov(SymMatrix::diagonal(d), b);
    const Eigen::MatrixXd bbt = b.m() * b.m().transpose();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(v.m()(i, j) + bbt(i, j) / (d(i) + d(j))) <= 1e-12);
      }
    }
  }
}

TEST_CASE("truncated_svd_of_factor") {
  {
    // orthonormal columns -> unit singular values of Z Z^T
    Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(30, 4, 2))
                            .householderQ() *
                        Eigen::MatrixXd::Identity(30, 4);
    const auto t = truncated_svd_of_factor(TallMatrix(q), 4);
    for (int i = 0; i < 4; ++i) CHECK(t.singular_values(i) == doctest::Approx(1.0));
  }
  {
    // duplicated column -> rank 1, sigma_1 = 2||z||^2
    Eigen::MatrixXd z(5, 2);
    z.col(0) = random_matrix(5, 1, 4);
    z.col(1) = z.col(0);
    const auto t = truncated_svd_of_factor(TallMatrix(z), 1);
    CHECK(t.singular_values(0) ==
          doctest::Approx(2.0 * z.col(0).squaredNorm()).epsilon(1e-12));
    CHECK(t.singular_values(1) == doctest::Approx(0.0).epsilon(1e-12));
  }
  {
    const TallMatrix z(random_matrix(100, 10, 8));
    // Eckart-Young at every admissible rank, against the dense eigenvalues
    const Eigen::MatrixXd v = z.m() * z.m().transpose();
    const auto eig = sym_eig(SymMatrix::symmetrized(v));
    const double scale = eig.eigenvalues.cwiseAbs().maxCoeff();
    for (int r = 1; r <= 10; ++r) {
      const auto t = truncated_svd_of_factor(z, r);
      const Eigen::MatrixXd diff = v - t.factor.m() * t.factor.m().transpose();
      const double err =
          sym_eig(SymMatrix::symmetrized(diff)).eigenvalues.cwiseAbs().maxCoeff();
      const double expected = r < 10 ? t.singular_values(r) : 0.0;
      CHECK(std::abs(err - expected) <= 1e-10 * scale);
    }
  }
  CHECK_THROWS_AS(truncated_svd_of_factor(TallMatrix(random_matrix(5, 2, 1)), 3),
                  DomainError);
  CHECK_THROWS_AS(truncated_svd_of_factor(TallMatrix(random_matrix(5, 2, 1)), 0),
                  DomainError);
}

TEST_CASE("spectral_interval") {
  Eigen::VectorXd d(2);
  d << -4.0, -1.0;
  const auto iv = spectral_interval(SymMatrix::diagonal(d));
  CHECK(iv.a == doctest::Approx(-4.0));
  CHECK(iv.b == doctest::Approx(-1.0));
  CHECK(iv.kappa() == doctest::Approx(4.0));

  const auto ident = spectral_interval(SymMatrix(-Eigen::MatrixXd::Identity(3, 3)));
  CHECK(ident.a == doctest::Approx(-1.0));
  CHECK(ident.b == doctest::Approx(-1.0));

  const auto fd = spectral_interval(build_laplacian_1d(100, 1.0));
  CHECK(std::abs(fd.a - fd_laplacian_eigenvalue(100, 1.0, 100)) <=
        1e-9 * std::abs(fd.a));
  CHECK(std::abs(fd.b - fd_laplacian_eigenvalue(100, 1.0, 1)) <= 1e-9 * std::abs(fd.a));

  CHECK_THROWS_AS(spectral_interval(SymMatrix(Eigen::MatrixXd::Identity(2, 2))),
                  StabilityError);
}
