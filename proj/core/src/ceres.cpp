// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#include "spdecov/ceres.hpp"

#include <algorithm>
#include <cmath>

#include "spdecov/bounds.hpp"
#include "spdecov/errors.hpp"

namespace spdecov {

namespace {

// Stationary covariance in the sine-mode coordinates of its own level.
Eigen::MatrixXd modal_stationary_covariance(const ProblemSpec& spec, int n,
                                            Discretization scheme) {
  const DiscretizedSystem sys = build_system(spec, n, scheme);
  const SymMatrix v = dense_lyapunov(sys.script_A, sys.B);
  const Eigen::MatrixXd z = sine_modes(n, spec.length, n);
  return z.transpose() * v.m() * z;
}

// Hilbert-Schmidt distance between a level's modal covariance (injected,
// missing modes zero) and the reference modal covariance.
double modal_error(const Eigen::MatrixXd& coarse, const Eigen::MatrixXd& reference) {
  Eigen::MatrixXd diff = reference;
  diff.topLeftCorner(coarse.rows(), coarse.cols()) -= coarse;
  return diff.norm();
}

}  // namespace

OrderStudy galerkin_order_study(const ProblemSpec& spec, const std::vector<int>& levels,
                                int reference_level, Discretization scheme) {
  if (levels.size() < 3) {
    throw DomainError("galerkin_order_study: need at least three levels");
  }
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1]) {
      throw DomainError("galerkin_order_study: levels must be increasing");
    }
  }
  if (reference_level < 2 * levels.back()) {
    throw DomainError(
        "galerkin_order_study: reference must be at least twice the finest level");
  }

  OrderStudy study;
  study.levels = levels;
  study.reference = reference_level;
  const Eigen::MatrixXd c_ref =
      modal_stationary_covariance(spec, reference_level, scheme);
  for (int n : levels) {
    const Eigen::MatrixXd c = modal_stationary_covariance(spec, n, scheme);
    study.h.push_back(spec.length / (n + 1));
    study.errors.push_back(modal_error(c, c_ref));
  }
  for (std::size_t i = 1; i < study.errors.size(); ++i) {
    if (study.errors[i] > study.errors[i - 1]) study.monotone = false;
  }

  // Least-squares fit of log(error) against log(h).
  const std::size_t m = study.errors.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(study.h[i]);
    const double ly = std::log(std::max(study.errors[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  study.observed_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  study.r = std::clamp(study.observed_order - 1.0, 0.0, 0.999);
  study.c_d = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    study.c_d = std::max(study.c_d,
                         study.errors[i] / std::pow(study.h[i], 1.0 + study.r));
  }
  return study;
}

CeresBudget assemble_budget(const DiscretizedSystem& sys, const OrderStudy& study,
                            const GapReport& gap, const CovarianceTrajectory& ode_traj,
                            const LowRankSolution& lr, double T) {
  if (gap.times.empty() || ode_traj.times.empty()) {
    throw DomainError("assemble_budget: empty stage artifacts");
  }
  if (ode_traj.matrices.front().n() != sys.script_A.n() ||
      lr.Z.rows() != sys.script_A.n()) {
    throw DomainError("assemble_budget: stage dimensions incompatible");
  }

  CeresBudget budget;
  budget.horizon = T;
  budget.c_d = study.c_d;
  budget.r = study.r;

  const SymMatrix v_star = dense_lyapunov(sys.script_A, sys.B);
  budget.v_star_norm = spectral_norm(v_star);

  // (S1) spatial discretization, Hilbert-Schmidt norm of the modal difference.
  budget.s1.bound = study.c_d * std::pow(sys.h, 1.0 + study.r);
  if (sys.N == study.reference) {
    budget.s1.measured = 0.0;
  } else {
    const auto it = std::find(study.levels.begin(), study.levels.end(), sys.N);
    if (it == study.levels.end()) {
      throw DomainError("assemble_budget: system level not covered by the study");
    }
    budget.s1.measured = study.errors[static_cast<std::size_t>(
        std::distance(study.levels.begin(), it))];
  }

  // (S2) linearization, supremum of gap and fitted envelope over the grid.
  // The tighter of the two reported envelopes that actually holds.
  const std::vector<double>& env = gap.double_rate_ok ? gap.bound_double_rate
                                                      : gap.bound_single_rate;
  budget.c_l = gap.double_rate_ok ? gap.c_l_double : gap.c_l_single;
  budget.rate_s2 = gap.double_rate_ok ? gap.rate_double : gap.rate_single;
  budget.s2.measured = *std::max_element(gap.gap.begin(), gap.gap.end());
  budget.s2.bound = env.empty() ? 0.0 : *std::max_element(env.begin(), env.end());

  // (S3) relaxation to the stationary covariance, evaluated at the horizon.
  const double rate_spec = decay_rate_spectral(sys.script_A);
  const double rate_h = decay_rate_H(sys.script_A);
  budget.rate_s3 = std::max(rate_spec, rate_h);
  const double dist0 = spectral_norm(
      SymMatrix(ode_traj.matrices.front().m() - v_star.m()));
  double c_tau = 0.0;
  for (std::size_t t = 0; t < ode_traj.times.size(); ++t) {
    const double dist =
        spectral_norm(SymMatrix(ode_traj.matrices[t].m() - v_star.m()));
    const double decayed = dist0 * std::exp(-budget.rate_s3 * ode_traj.times[t]);
    if (decayed > 0.0) c_tau = std::max(c_tau, dist / decayed);
  }
  budget.c_tau = c_tau;
  budget.s3.measured = spectral_norm(
      SymMatrix(ode_traj.matrices.back().m() - v_star.m()));
  budget.s3.bound = c_tau * dist0 * std::exp(-budget.rate_s3 * T);

  // (S4) low-rank solver error against the elliptic bound.
  const SpectralInterval interval = spectral_interval(sys.script_A);
  budget.s4.bound = theoretical_error_bound(interval, lr.steps) * budget.v_star_norm;
  const Eigen::MatrixXd vj = lr.Z.m() * lr.Z.m().transpose();
  budget.s4.measured = spectral_norm(SymMatrix::symmetrized(vj - v_star.m()));

  budget.total_bound =
      budget.s1.bound + budget.s2.bound + budget.s3.bound + budget.s4.bound;
  budget.total_measured = budget.s1.measured + budget.s2.measured +
                          budget.s3.measured + budget.s4.measured;
  budget.consistent = budget.total_measured <= budget.total_bound;

  const double bounds[4] = {budget.s1.bound, budget.s2.bound, budget.s3.bound,
                            budget.s4.bound};
  const char* names[4] = {"err_s1", "err_s2", "err_s3", "err_s4"};
  int arg = 0;
  for (int i = 1; i < 4; ++i) {
    if (bounds[i] > bounds[arg]) arg = i;
  }
  budget.dominant = names[arg];
  return budget;
}

}  // namespace spdecov
