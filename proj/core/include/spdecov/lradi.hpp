// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "spdecov/linalg.hpp"

namespace spdecov {

enum class ShiftSource { wachspress, user };

/// Ordered real negative ADI shifts.
struct ShiftSet {
  std::vector<double> shifts;
  ShiftSource source = ShiftSource::user;
  /// Generating interval; present for Wachspress shifts (enables the
  /// Theta bound history during the iteration).
  std::optional<SpectralInterval> interval;
};

/// Shifts alpha_i = a dn((2i-1)K/(2j), k) for the interval [a,b], with
/// k' = b/a. All shifts lie in [a,b]; a degenerate interval a = b yields
/// j copies of a.
ShiftSet wachspress_shifts(const SpectralInterval& interval, int j);

/// Wraps user-provided shifts; all must be strictly negative.
ShiftSet user_shifts(std::vector<double> shifts);

struct AdiStop {
  int max_steps = 100;
  double residual_tol = 1e-10;  ///< on ||W_j||_2^2 / ||B||_2^2
};

/// Low-rank solution V_j = Z Z^T with residual factor W.
///
/// residual_history[m] = ||W_m||_2^2, which for symmetric operators and
/// real shifts equals the spectral norm of the Lyapunov residual
/// A V_m + V_m A^T + B B^T. theta_history is filled when the shift set
/// carries its generating interval.
struct LowRankSolution {
  TallMatrix Z;
  TallMatrix W;
  int steps = 0;
  std::vector<double> theta_history;
  std::vector<double> residual_history;
};

/// Low-rank ADI iteration: H_m = (A + alpha_m I)^{-1} W_{m-1},
/// W_m = W_{m-1} - 2 alpha_m H_m, Z <- [Z, sqrt(-2 alpha_m) H_m], W_0 = B.
/// Shifts are reused cyclically past the end of the set. Stops on the
/// relative residual or after max_steps. Throws SolverError("iteration
/// diverged") when non-finite values appear.
LowRankSolution lr_adi_run(const SymMatrix& a, const TallMatrix& b,
                           const ShiftSet& shifts, const AdiStop& stop = {});

/// Per-shift factors and cumulative spectral-radius bounds on an interval.
///
/// rho[i]   = max over the endpoints {a,b} of |(z - alpha_i)/(z + alpha_i)|
/// theta[m] = max over the endpoints of |prod_{i<=m} (z - alpha_i)/(z + alpha_i)|
///
/// For real shifts each single factor attains its interval maximum at an
/// endpoint; for the full Wachspress set the cumulative value equals the
/// optimal spectral radius (1 - sqrt(k'_j))/(1 + sqrt(k'_j)).
struct ThetaTable {
  std::vector<double> rho;
  std::vector<double> theta;
};

ThetaTable theta_bound(const ShiftSet& shifts, const SpectralInterval& interval);

/// Relative error factor ((1 - sqrt(k'_j))/(1 + sqrt(k'_j)))^2, where k'_j
/// is read back from the nome power q^j. Zero for a degenerate interval.
double theoretical_error_bound(const SpectralInterval& interval, int j);

}  // namespace spdecov
