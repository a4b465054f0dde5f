// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#include "spdecov/discretize.hpp"

#include <Eigen/LU>
#include <cmath>

#include "spdecov/errors.hpp"

namespace spdecov {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Nonlinearity Nonlinearity::linear(double c) { return {Kind::linear, c}; }
Nonlinearity Nonlinearity::cubic(double mu) { return {Kind::cubic, mu}; }
Nonlinearity Nonlinearity::logistic(double mu) { return {Kind::logistic, mu}; }

double Nonlinearity::f(double u) const {
  switch (kind_) {
    case Kind::linear:
      return -param_ * u;
    case Kind::cubic:
      return param_ * u - u * u * u;
    case Kind::logistic:
      return param_ * u * (1.0 - u);
  }
  return 0.0;
}

double Nonlinearity::fprime(double u) const {
  switch (kind_) {
    case Kind::linear:
      return -param_;
    case Kind::cubic:
      return param_ - 3.0 * u * u;
    case Kind::logistic:
      return param_ * (1.0 - 2.0 * u);
  }
  return 0.0;
}

double Nonlinearity::lipschitz(double radius, const Eigen::VectorXd& u_star) const {
  const double umax = u_star.size() ? u_star.cwiseAbs().maxCoeff() : 0.0;
  const double reach = umax + radius;
  switch (kind_) {
    case Kind::linear:
      return std::abs(param_);
    case Kind::cubic:
      return std::abs(param_) + 3.0 * reach * reach;
    case Kind::logistic:
      return std::abs(param_) * (1.0 + 2.0 * reach);
  }
  return 0.0;
}

double Nonlinearity::remainder_lipschitz(double radius,
                                         const Eigen::VectorXd& u_star) const {
  const double umax = u_star.size() ? u_star.cwiseAbs().maxCoeff() : 0.0;
  switch (kind_) {
    case Kind::linear:
      return 0.0;  // r(s) = 0 identically
    case Kind::cubic:
      // r(s;u) = -3u s^2 - s^3, |r'| <= 6|u| radius + 3 radius^2
      return 6.0 * umax * radius + 3.0 * radius * radius;
    case Kind::logistic:
      // r(s;u) = -mu s^2, |r'| <= 2|mu| radius
      return 2.0 * std::abs(param_) * radius;
  }
  return 0.0;
}

SymMatrix build_laplacian_1d(int N, double L) {
  if (N < 1) throw DomainError("build_laplacian_1d: N must be >= 1");
  if (!(L > 0.0)) throw DomainError("build_laplacian_1d: L must be positive");
  const double h = L / (N + 1);
  const double inv_h2 = 1.0 / (h * h);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    a(i, i) = -2.0 * inv_h2;
    if (i > 0) a(i, i - 1) = inv_h2;
    if (i + 1 < N) a(i, i + 1) = inv_h2;
  }
  return SymMatrix(std::move(a));
}

SymMatrix build_laplacian_1d_spectral(int N, double L) {
  if (N < 1) throw DomainError("build_laplacian_1d_spectral: N must be >= 1");
  if (!(L > 0.0)) throw DomainError("build_laplacian_1d_spectral: L must be positive");
  const Eigen::MatrixXd z = sine_modes(N, L, N);
  Eigen::VectorXd lam(N);
  for (int k = 1; k <= N; ++k) {
    const double w = k * kPi / L;
    lam(k - 1) = -w * w;
  }
  return SymMatrix::symmetrized(z * lam.asDiagonal() * z.transpose());
}

double fd_laplacian_eigenvalue(int N, double L, int k) {
  const double h = L / (N + 1);
  const double s = std::sin(k * kPi / (2.0 * (N + 1)));
  return -4.0 / (h * h) * s * s;
}

Eigen::MatrixXd sine_modes(int N, double L, int count) {
  if (count < 1 || count > N) {
    throw DomainError("sine_modes: count must lie in [1,N]");
  }
  const double h = L / (N + 1);
  Eigen::MatrixXd z(N, count);
  const double scale = std::sqrt(2.0 * h / L);
  for (int i = 1; i <= count; ++i) {
    for (int j = 1; j <= N; ++j) {
      z(j - 1, i - 1) = scale * std::sin(i * kPi * (j * h) / L);
    }
  }
  return z;
}

Eigen::VectorXd newton_steady_state(const SymMatrix& a_h, const Nonlinearity& f,
                                    const Eigen::VectorXd& guess) {
  const Eigen::Index n = a_h.n();
  if (guess.size() != n) {
    throw DomainError("newton_steady_state: guess dimension mismatch");
  }
  Eigen::VectorXd u = guess;
  const double tol = 1e-12 * std::sqrt(static_cast<double>(n));
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd fu(n);
    for (Eigen::Index i = 0; i < n; ++i) fu(i) = f.f(u(i));
    Eigen::VectorXd res = a_h.m() * u + fu;
    if (res.norm() <= tol) {
      converged = true;
      break;
    }
    Eigen::MatrixXd jac = a_h.m();
    for (Eigen::Index i = 0; i < n; ++i) jac(i, i) += f.fprime(u(i));
    u += jac.partialPivLu().solve(-res);
  }
  if (!converged) {
    Eigen::VectorXd fu(n);
    for (Eigen::Index i = 0; i < n; ++i) fu(i) = f.f(u(i));
    if ((a_h.m() * u + fu).norm() > tol) {
      throw SolverError("steady state not found");
    }
  }
  // (A5): the root must be linearly stable.
  Eigen::MatrixXd lin = a_h.m();
  for (Eigen::Index i = 0; i < n; ++i) lin(i, i) += f.fprime(u(i));
  if (sym_eig(SymMatrix::symmetrized(lin)).eigenvalues.maxCoeff() >= 0.0) {
    throw StabilityError("steady state unstable (violates (A5))");
  }
  return u;
}

SymMatrix linearize(const SymMatrix& a_h, const Nonlinearity& f,
                    const Eigen::VectorXd& u_star) {
  if (u_star.size() != a_h.n()) {
    throw DomainError("linearize: state dimension mismatch");
  }
  Eigen::MatrixXd lin = a_h.m();
  for (Eigen::Index i = 0; i < u_star.size(); ++i) {
    lin(i, i) += f.fprime(u_star(i));
  }
  SymMatrix out(std::move(lin));
  if (sym_eig(out).eigenvalues.maxCoeff() >= 0.0) {
    throw StabilityError("(A5) spectral condition violated");
  }
  return out;
}

TallMatrix build_noise_factor(const ProblemSpec& spec, int N,
                              const Eigen::VectorXd& u_star) {
  (void)u_star;  // g is a multiplicative constant at the steady state
  const int R = spec.noise_rank;
  if (R < 1) throw DomainError("build_noise_factor: noise_rank must be >= 1");
  if (R > N) throw DomainError("build_noise_factor: noise_rank exceeds dimension");
  if (!(spec.upsilon > 0.0)) {
    throw DomainError("build_noise_factor: upsilon must be positive");
  }
  Eigen::MatrixXd b = sine_modes(N, spec.length, R);
  for (int i = 0; i < R; ++i) {
    b.col(i).normalize();
    b.col(i) *= std::pow(static_cast<double>(i + 1), -0.5 * spec.gamma);
  }
  TallMatrix raw(std::move(b));
  const double norm = spectral_norm(raw);
  return TallMatrix(raw.m() * (spec.upsilon / norm));
}

DiscretizedSystem build_system(const ProblemSpec& spec, int N, Discretization scheme) {
  DiscretizedSystem sys;
  sys.problem = spec;
  sys.N = N;
  sys.h = spec.length / (N + 1);
  sys.A_h = scheme == Discretization::finite_difference
                ? build_laplacian_1d(N, spec.length)
                : build_laplacian_1d_spectral(N, spec.length);

  Eigen::VectorXd guess = Eigen::VectorXd::Zero(N);
  if (spec.steady_guess == SteadyGuess::bump) {
    const double root2 = std::sqrt(2.0);
    for (int j = 1; j <= N; ++j) {
      const double x = j * sys.h;
      guess(j - 1) = std::tanh(x / root2) * std::tanh((spec.length - x) / root2);
    }
  }
  sys.u_star = newton_steady_state(sys.A_h, spec.nonlinearity, guess);
  sys.script_A = linearize(sys.A_h, spec.nonlinearity, sys.u_star);
  sys.B = build_noise_factor(spec, N, sys.u_star);
  sys.upsilon = spectral_norm(sys.B);
  return sys;
}

}  // namespace spdecov
