// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "spdecov/linalg.hpp"

namespace spdecov {

/// Relative singular-value decay bound
///   (prod_{i=0}^{p-1} (kappa^{(2i+1)/(2p)} - 1)/(kappa^{(2i+1)/(2p)} + 1))^2
/// for sigma_{Rp+1}(V_*)/sigma_1(V_*). Requires kappa >= 1, p >= 1.
double penzl_bound(double kappa, int p);

/// Elliptic decay bound ((1 - sqrt(k'_r))/(1 + sqrt(k'_r)))^2 with k'_r
/// read back from the nome power q^r, for sigma_{Rr+1}/sigma_1. The
/// degenerate interval a = b extends continuously to 0.
double sabino_bound(const SpectralInterval& interval, int r);

/// Singular values of the dense stationary solution against both decay
/// bound sequences, indexed in strides of R = cols(B).
struct DecayReport {
  Eigen::VectorXd singular_values;  ///< descending, length N
  std::vector<double> penzl;        ///< bound at stride index r = 1,2,...
  std::vector<double> sabino;
  int noise_rank = 1;
  bool all_hold = true;  ///< every sigma_{Rr+1} <= sigma_1 * bound (+ roundoff floor)
  int violations = 0;
};

/// Dense sweep at desk scale (N <= 1000): solves the stationary equation,
/// computes singular values and both bound sequences, and checks
/// sigma_{Rr+1} <= sigma_1 * bound for every admissible r. Computed
/// singular values carry an eigensolver roundoff floor of 1e-12 sigma_1,
/// which the comparison allows for.
DecayReport verify_decay(const SymMatrix& a, const TallMatrix& b);

/// Transient decay exponent min_i |lambda_i(A)|.
double decay_rate_spectral(const SymMatrix& a);

/// Alternative exponent 2/||H||_2 with A H + H A^T + 2 I = 0. For
/// symmetric A this equals 2 min_i |lambda_i|.
double decay_rate_H(const SymMatrix& a);

}  // namespace spdecov
