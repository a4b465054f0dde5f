// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "spdecov/linalg.hpp"

namespace spdecov {

/// Closed catalog of scalar reaction terms. Each entry carries f, f' and
/// Lipschitz data used by the linearization-error estimates:
///  - linear:    f(u) = -c u
///  - cubic:     f(u) = mu u - u^3
///  - logistic:  f(u) = mu u (1 - u)
class Nonlinearity {
 public:
  enum class Kind { linear, cubic, logistic };

  static Nonlinearity linear(double c);
  static Nonlinearity cubic(double mu);
  static Nonlinearity logistic(double mu);

  double f(double u) const;
  double fprime(double u) const;

  /// max |f'| on the ball of the given radius around the range of u_star.
  double lipschitz(double radius, const Eigen::VectorXd& u_star) const;

  /// Lipschitz constant of the drift remainder
  ///   r(s; u) = f(u + s) - f(u) - f'(u) s
  /// on |s| <= radius, maximized over the entries of u_star. Identically
  /// zero for the linear entry.
  double remainder_lipschitz(double radius, const Eigen::VectorXd& u_star) const;

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  bool is_linear() const { return kind_ == Kind::linear; }

 private:
  Nonlinearity(Kind kind, double param) : kind_(kind), param_(param) {}
  Kind kind_;
  double param_;
};

/// Steady-state initial guess for the Newton solve.
enum class SteadyGuess { zero, bump };

/// Problem data: 1D reaction-diffusion on (0,L) with homogeneous
/// Dirichlet boundary, additive noise from an R-mode truncated Q-Wiener
/// process with eigenvalue decay lambda_{Q,i} = i^(-gamma), overall
/// noise level upsilon (realized as the spectral norm of B).
struct ProblemSpec {
  double length = 1.0;
  Nonlinearity nonlinearity = Nonlinearity::linear(0.0);
  double upsilon = 0.1;
  double gamma = 2.0;
  int noise_rank = 1;
  SteadyGuess steady_guess = SteadyGuess::zero;
};

enum class Discretization { finite_difference, spectral };

/// Discretized, linearized, noise-truncated system.
struct DiscretizedSystem {
  double h = 0.0;              ///< mesh width L/(N+1)
  int N = 0;                   ///< interior dimension
  SymMatrix A_h;               ///< discrete diffusion operator
  Eigen::VectorXd u_star;      ///< steady state, A_h u + f(u) = 0
  SymMatrix script_A;          ///< linearization A_h + diag(f'(u_star))
  TallMatrix B;                ///< N x R noise factor, ||B||_2 = upsilon
  double upsilon = 0.0;        ///< realized ||B||_2
  ProblemSpec problem;
};

/// (1/h^2) tridiag(1,-2,1) with h = L/(N+1), homogeneous Dirichlet.
SymMatrix build_laplacian_1d(int N, double L);

/// Spectral Galerkin variant: same sine eigenvectors, exact continuum
/// eigenvalues -(k pi / L)^2. Used by convergence studies.
SymMatrix build_laplacian_1d_spectral(int N, double L);

/// Closed-form eigenvalue of the finite-difference Laplacian,
/// lambda_k = -(4/h^2) sin^2(k pi / (2(N+1))), k = 1..N.
double fd_laplacian_eigenvalue(int N, double L, int k);

/// First `count` discrete sine modes, columns sqrt(2h/L) sin(i pi x_j / L);
/// orthonormal in the Euclidean inner product.
Eigen::MatrixXd sine_modes(int N, double L, int count);

/// Newton iteration for A_h u + f(u) = 0, at most 50 steps, residual
/// tolerance 1e-12 sqrt(N). The converged state is verified to have a
/// negative definite linearization. Throws SolverError("steady state not
/// found") without convergence and StabilityError("steady state unstable
/// (violates (A5))") for an unstable root.
Eigen::VectorXd newton_steady_state(const SymMatrix& a_h, const Nonlinearity& f,
                                    const Eigen::VectorXd& guess);

/// A_h + diag(f'(u_star)); throws StabilityError("(A5) spectral condition
/// violated") unless negative definite.
SymMatrix linearize(const SymMatrix& a_h, const Nonlinearity& f,
                    const Eigen::VectorXd& u_star);

/// Noise factor with columns sqrt(lambda_{Q,i}) zeta_i, globally rescaled
/// so that ||B||_2 = upsilon. Requires noise_rank <= N.
TallMatrix build_noise_factor(const ProblemSpec& spec, int N,
                              const Eigen::VectorXd& u_star);

/// Full pipeline: diffusion operator, steady state, linearization
/// (stability checked), noise factor.
DiscretizedSystem build_system(const ProblemSpec& spec, int N,
                               Discretization scheme = Discretization::finite_difference);

}  // namespace spdecov
