// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "spdecov/discretize.hpp"
#include "spdecov/lradi.hpp"
#include "spdecov/mc.hpp"

namespace spdecov {

/// Mesh-refinement study of the stationary covariance.
///
/// Each level's stationary covariance is expressed in its discrete sine
/// modes and injected into the reference level's modes (missing modes act
/// as zero); errors are Hilbert-Schmidt (Frobenius) norms of the modal
/// difference. The fit of log(error) against log(h) gives the observed
/// order; c_d is the smallest prefactor with error <= c_d h^(1+r) across
/// all studied levels, where r = clamp(order - 1, [0, 1)).
struct OrderStudy {
  std::vector<int> levels;
  int reference = 0;
  std::vector<double> h;
  std::vector<double> errors;
  double observed_order = 0.0;
  double r = 0.0;
  double c_d = 0.0;
  bool monotone = true;  ///< false flags "refinement study inconclusive"
};

/// Requires >= 3 increasing levels and a reference at least twice as fine
/// as the finest level.
OrderStudy galerkin_order_study(const ProblemSpec& spec, const std::vector<int>& levels,
                                int reference_level,
                                Discretization scheme = Discretization::finite_difference);

struct ErrorTerm {
  double bound = 0.0;
  double measured = 0.0;
};

/// Four-term combined error budget.
///
/// total_bound is the exact sum of the four per-term bounds (each already
/// a supremum over its stage's grid); total_measured sums the measured
/// counterparts. The relaxation term is evaluated at the horizon T, so its
/// bound decreases in T at the reported rate; the reported rate is the
/// tighter of min|lambda| and 2/||H||_2.
struct CeresBudget {
  ErrorTerm s1, s2, s3, s4;
  double total_bound = 0.0;
  double total_measured = 0.0;
  std::string dominant;     ///< "err_s1".."err_s4", largest bound
  bool consistent = true;   ///< total_measured <= total_bound
  double c_d = 0.0;
  double r = 0.0;
  double c_l = 0.0;
  double c_tau = 0.0;
  double rate_s2 = 0.0;
  double rate_s3 = 0.0;
  double v_star_norm = 0.0;
  double horizon = 0.0;
};

/// Assembles the budget from the four stage artifacts. The system's level
/// must be either one of the study levels or its reference, and the gap
/// and relaxation trajectories must live on the system's dimension.
CeresBudget assemble_budget(const DiscretizedSystem& sys, const OrderStudy& study,
                            const GapReport& gap, const CovarianceTrajectory& ode_traj,
                            const LowRankSolution& lr, double T);

}  // namespace spdecov
