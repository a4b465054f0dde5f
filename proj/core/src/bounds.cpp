// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#include "spdecov/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "spdecov/errors.hpp"
#include "spdecov/lradi.hpp"

namespace spdecov {

double penzl_bound(double kappa, int p) {
  if (!(kappa >= 1.0)) throw DomainError("penzl_bound: kappa must be >= 1");
  if (p < 1) throw DomainError("penzl_bound: index must be >= 1");
  double prod = 1.0;
  for (int i = 0; i < p; ++i) {
    const double e = (2.0 * i + 1.0) / (2.0 * p);
    const double t = std::pow(kappa, e);
    prod *= (t - 1.0) / (t + 1.0);
  }
  return prod * prod;
}

double sabino_bound(const SpectralInterval& interval, int r) {
  if (r < 1) throw DomainError("sabino_bound: index must be >= 1");
  // Same elliptic evaluation as the ADI error factor.
  return theoretical_error_bound(interval, r);
}

DecayReport verify_decay(const SymMatrix& a, const TallMatrix& b) {
  if (a.n() > 1000) {
    throw DomainError("verify_decay: desk-scale guard, N must be <= 1000");
  }
  const SymMatrix v = dense_lyapunov(a, b);
  const SpectralInterval interval = spectral_interval(a);
  const double kappa = interval.kappa();
  const int n = static_cast<int>(a.n());
  const int R = static_cast<int>(b.cols());

  const EigDecomposition eig = sym_eig(v);
  Eigen::VectorXd sigma(n);
  for (int i = 0; i < n; ++i) sigma(i) = std::abs(eig.eigenvalues(n - 1 - i));
  std::sort(sigma.data(), sigma.data() + n, std::greater<double>());

  DecayReport report;
  report.singular_values = sigma;
  report.noise_rank = R;
  const double sigma1 = sigma(0);
  const double floor = 1e-12 * sigma1;  // dense-eig roundoff allowance
  for (int r = 1; R * r + 1 <= n; ++r) {
    const double pz = penzl_bound(kappa, r);
    const double sb = sabino_bound(interval, r);
    report.penzl.push_back(pz);
    report.sabino.push_back(sb);
    const double s = sigma(R * r);  // sigma_{Rr+1}, zero-based index Rr
    if (s > sigma1 * pz + floor || s > sigma1 * sb + floor) {
      report.all_hold = false;
      ++report.violations;
    }
  }
  return report;
}

double decay_rate_spectral(const SymMatrix& a) {
  const SpectralInterval interval = spectral_interval(a);
  return -interval.b;
}

double decay_rate_H(const SymMatrix& a) {
  const Eigen::Index n = a.n();
  const double s = std::sqrt(2.0);
  const TallMatrix rhs(Eigen::MatrixXd(s * Eigen::MatrixXd::Identity(n, n)));
  const SymMatrix h = dense_lyapunov(a, rhs);
  return 2.0 / spectral_norm(h);
}

}  // namespace spdecov
