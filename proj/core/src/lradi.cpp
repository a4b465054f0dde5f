// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#include "spdecov/lradi.hpp"

#include <cmath>

#include "spdecov/elliptic.hpp"
#include "spdecov/errors.hpp"

namespace spdecov {

namespace {

void check_interval(const SpectralInterval& iv) {
  if (!(iv.b < 0.0) || !(iv.a <= iv.b)) {
    throw StabilityError("unstable interval");
  }
}

double cayley_factor(double z, double alpha) {
  return (z - alpha) / (z + alpha);
}

}  // namespace

ShiftSet wachspress_shifts(const SpectralInterval& interval, int j) {
  check_interval(interval);
  if (j < 1) throw DomainError("wachspress_shifts: step count must be >= 1");
  ShiftSet out;
  out.source = ShiftSource::wachspress;
  out.interval = interval;
  out.shifts.resize(j);
  if (interval.a == interval.b) {
    for (int i = 0; i < j; ++i) out.shifts[i] = interval.a;
    return out;
  }
  const double k_prime = interval.b / interval.a;
  const elliptic::EllipticData ed = elliptic::make_elliptic_from_complement(k_prime);
  for (int i = 1; i <= j; ++i) {
    const double u = (2.0 * i - 1.0) * ed.K / (2.0 * j);
    out.shifts[i - 1] = interval.a * elliptic::jacobi_dn_from_complement(u, k_prime);
  }
  return out;
}

ShiftSet user_shifts(std::vector<double> shifts) {
  if (shifts.empty()) throw DomainError("user_shifts: empty shift set");
  for (double s : shifts) {
    if (!(s < 0.0)) throw DomainError("user_shifts: shifts must be negative");
  }
  ShiftSet out;
  out.shifts = std::move(shifts);
  out.source = ShiftSource::user;
  return out;
}

LowRankSolution lr_adi_run(const SymMatrix& a, const TallMatrix& b,
                           const ShiftSet& shifts, const AdiStop& stop) {
  if (shifts.shifts.empty()) throw DomainError("lr_adi_run: empty shift set");
  if (b.m().norm() == 0.0) throw DomainError("lr_adi_run: zero right-hand side");
  if (a.n() != b.rows()) throw DomainError("lr_adi_run: dimension mismatch");

  const Eigen::Index n = a.n();
  const Eigen::Index r = b.cols();
  const double b_norm2 = spectral_norm(b);
  const double ref = b_norm2 * b_norm2;

  Eigen::MatrixXd w = b.m();
  Eigen::MatrixXd z(n, 0);
  LowRankSolution out;

  // Endpoint state for the cumulative Theta bound.
  double prod_a = 1.0;
  double prod_b = 1.0;

  int m = 0;
  while (m < stop.max_steps) {
    const double alpha = shifts.shifts[m % shifts.shifts.size()];
    const TallMatrix h = shifted_solve(a, alpha, TallMatrix(w));
    if (!h.m().allFinite()) throw SolverError("iteration diverged");
    z.conservativeResize(Eigen::NoChange, z.cols() + r);
    z.rightCols(r) = std::sqrt(-2.0 * alpha) * h.m();
    w -= 2.0 * alpha * h.m();
    if (!w.allFinite()) throw SolverError("iteration diverged");
    ++m;

    const double w_norm = spectral_norm(TallMatrix(w));
    out.residual_history.push_back(w_norm * w_norm);
    if (shifts.interval) {
      prod_a *= cayley_factor(shifts.interval->a, alpha);
      prod_b *= cayley_factor(shifts.interval->b, alpha);
      out.theta_history.push_back(std::max(std::abs(prod_a), std::abs(prod_b)));
    }
    if (out.residual_history.back() <= stop.residual_tol * ref) break;
  }

  out.Z = TallMatrix(std::move(z));
  out.W = TallMatrix(std::move(w));
  out.steps = m;
  return out;
}

ThetaTable theta_bound(const ShiftSet& shifts, const SpectralInterval& interval) {
  check_interval(interval);
  if (shifts.shifts.empty()) throw DomainError("theta_bound: empty shift set");
  ThetaTable table;
  double prod_a = 1.0;
  double prod_b = 1.0;
  for (double alpha : shifts.shifts) {
    const double fa = cayley_factor(interval.a, alpha);
    const double fb = cayley_factor(interval.b, alpha);
    table.rho.push_back(std::max(std::abs(fa), std::abs(fb)));
    prod_a *= fa;
    prod_b *= fb;
    table.theta.push_back(std::max(std::abs(prod_a), std::abs(prod_b)));
  }
  return table;
}

double theoretical_error_bound(const SpectralInterval& interval, int j) {
  check_interval(interval);
  if (j < 1) throw DomainError("theoretical_error_bound: j must be >= 1");
  if (interval.a == interval.b) return 0.0;
  const double k_prime = interval.b / interval.a;
  const elliptic::EllipticData ed = elliptic::make_elliptic_from_complement(k_prime);
  const double kpj = elliptic::modulus_from_nome(std::pow(ed.q, j));
  const double s = std::sqrt(kpj);
  const double theta = (1.0 - s) / (1.0 + s);
  return theta * theta;
}

}  // namespace spdecov
