// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#include "spdecov/mc.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "spdecov/bounds.hpp"
#include "spdecov/errors.hpp"
#include "spdecov/rng.hpp"

namespace spdecov {

namespace {

constexpr int kMaxOutputPoints = 200;
constexpr Eigen::Index kPathBlock = 2048;

void validate(const SimConfig& cfg) {
  if (!(cfg.dt >= 0.0)) throw DomainError("SimConfig: dt must be nonnegative");
  if (!(cfg.T > 0.0)) throw DomainError("SimConfig: T must be positive");
  if (cfg.dt > 0.0 && cfg.T < cfg.dt) throw DomainError("SimConfig: need T >= dt");
  if (cfg.M < 2) throw DomainError("SimConfig: need at least two paths");
  if (cfg.output_points < 2) throw DomainError("SimConfig: need >= 2 output points");
}

// Fixed-shape pairwise tree reduction; the result is independent of how
// the leaves were produced (per-block partial sums).
template <typename T>
T pairwise_combine(std::vector<T> parts) {
  while (parts.size() > 1) {
    std::vector<T> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      next.push_back(parts[i] + parts[i + 1]);
    }
    if (parts.size() % 2 == 1) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts.front();
}

// Either a tridiagonal stencil or a dense multiply, chosen once per run.
struct OperatorApply {
  bool tridiag = false;
  Eigen::VectorXd diag;
  Eigen::VectorXd off;  // off(i) = A(i, i+1)
  const Eigen::MatrixXd* dense = nullptr;

  explicit OperatorApply(const SymMatrix& a) {
    const Eigen::Index n = a.n();
    bool banded = true;
    for (Eigen::Index j = 0; j < n && banded; ++j) {
      for (Eigen::Index i = j + 2; i < n; ++i) {
        if (a.m()(i, j) != 0.0) {
          banded = false;
          break;
        }
      }
    }
    if (banded) {
      tridiag = true;
      diag = a.m().diagonal();
      off.resize(std::max<Eigen::Index>(n - 1, 0));
      for (Eigen::Index i = 0; i + 1 < n; ++i) off(i) = a.m()(i, i + 1);
    } else {
      dense = &a.m();
    }
  }

  // D = X * A for row-major path layout (X is M x N, A symmetric).
  void apply(const Eigen::MatrixXd& x, Eigen::MatrixXd& d) const {
    if (!tridiag) {
      d.noalias() = x * (*dense);
      return;
    }
    const Eigen::Index n = x.cols();
    for (Eigen::Index i = 0; i < n; ++i) {
      d.col(i) = diag(i) * x.col(i);
      if (i > 0) d.col(i) += off(i - 1) * x.col(i - 1);
      if (i + 1 < n) d.col(i) += off(i) * x.col(i + 1);
    }
  }
};

// Adds the exact Taylor remainder of the catalog entry columnwise;
// identically zero for the linear entry (skipped there, which keeps the
// code path of the coupled linear run bitwise identical).
void add_remainder(const Nonlinearity& f, const Eigen::VectorXd& u_star,
                   const Eigen::MatrixXd& x, Eigen::MatrixXd& d) {
  switch (f.kind()) {
    case Nonlinearity::Kind::linear:
      return;
    case Nonlinearity::Kind::cubic:
      for (Eigen::Index i = 0; i < x.cols(); ++i) {
        const auto xi = x.col(i).array();
        d.col(i).array() -= xi.square() * (3.0 * u_star(i) + xi);
      }
      return;
    case Nonlinearity::Kind::logistic: {
      const double mu = f.parameter();
      for (Eigen::Index i = 0; i < x.cols(); ++i) {
        d.col(i).array() -= mu * x.col(i).array().square();
      }
      return;
    }
  }
}

Eigen::VectorXd block_mean(const Eigen::MatrixXd& x, Eigen::Index block) {
  const Eigen::Index m = x.rows();
  std::vector<Eigen::VectorXd> sums;
  for (Eigen::Index lo = 0; lo < m; lo += block) {
    const Eigen::Index len = std::min(block, m - lo);
    sums.push_back(x.middleRows(lo, len).colwise().sum().transpose());
  }
  return pairwise_combine(std::move(sums)) / static_cast<double>(m);
}

Eigen::MatrixXd centered_gram(const Eigen::MatrixXd& x, const Eigen::VectorXd& mean,
                              Eigen::Index block) {
  const Eigen::Index m = x.rows();
  const Eigen::Index n = x.cols();
  std::vector<Eigen::MatrixXd> grams;
  for (Eigen::Index lo = 0; lo < m; lo += block) {
    const Eigen::Index len = std::min(block, m - lo);
    Eigen::MatrixXd xc = x.middleRows(lo, len);
    xc.rowwise() -= mean.transpose();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    g.selfadjointView<Eigen::Lower>().rankUpdate(xc.transpose());
    grams.push_back(std::move(g));
  }
  return pairwise_combine(std::move(grams));
}

struct Snapshot {
  SymMatrix cov;
  Eigen::VectorXd mean;
  double mean_norm;
  double second_norm;
  double max_abs;
};

Snapshot sample_statistics(const Eigen::MatrixXd& x) {
  const Eigen::Index m = x.rows();
  const Eigen::VectorXd mean = block_mean(x, kPathBlock);
  Eigen::MatrixXd gram = centered_gram(x, mean, kPathBlock);
  gram /= static_cast<double>(m - 1);
  gram.triangularView<Eigen::StrictlyUpper>() =
      gram.triangularView<Eigen::StrictlyLower>().transpose();

  std::vector<Eigen::Vector2d> norms;  // (sum ||z||, sum ||z||^2) per block
  for (Eigen::Index lo = 0; lo < m; lo += kPathBlock) {
    const Eigen::Index len = std::min(kPathBlock, m - lo);
    const Eigen::VectorXd sq = x.middleRows(lo, len).rowwise().squaredNorm();
    norms.push_back(Eigen::Vector2d(sq.array().sqrt().sum(), sq.sum()));
  }
  const Eigen::Vector2d ns = pairwise_combine(std::move(norms));

  Snapshot s;
  s.cov = SymMatrix(std::move(gram));
  s.mean = mean;
  s.mean_norm = ns(0) / static_cast<double>(m);
  s.second_norm = ns(1) / static_cast<double>(m);
  s.max_abs = m > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  return s;
}

CovarianceTrajectory simulate(const DiscretizedSystem& sys, const SimConfig& cfg,
                              bool nonlinear) {
  validate(cfg);
  const Eigen::Index n = sys.script_A.n();
  const Eigen::Index r = sys.B.cols();
  const Eigen::Index m = cfg.M;

  const double lam_max = spectral_norm(sys.script_A);
  const double dt_req = cfg.dt > 0.0 ? cfg.dt : 0.1 / lam_max;
  const int steps = std::max<int>(1, static_cast<int>(std::ceil(cfg.T / dt_req - 1e-12)));
  const double dt = cfg.T / steps;
  if (dt * lam_max >= 1.0) {
    throw StabilityError("step size violates stability");
  }

  // Output grid: at most kMaxOutputPoints snapshots including t=0 and t=T.
  const int n_out = std::min({cfg.output_points, kMaxOutputPoints, steps + 1});
  std::vector<int> record;
  record.reserve(n_out);
  for (int k = 0; k < n_out; ++k) {
    const int idx = static_cast<int>(
        std::llround(static_cast<double>(k) * steps / (n_out - 1)));
    if (record.empty() || idx > record.back()) record.push_back(idx);
  }

  const CounterRng rng(cfg.seed);
  const OperatorApply op(sys.script_A);
  const Eigen::MatrixXd bt = sys.B.m().transpose();
  const double sqrt_dt = std::sqrt(dt);

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, n);   // fluctuations, one row per path
  Eigen::MatrixXd drift(m, n);
  Eigen::MatrixXd dw(m, r);

  CovarianceTrajectory traj;
  traj.source = nonlinear ? TrajectorySource::mc_nonlinear : TrajectorySource::mc_linear;

  auto record_snapshot = [&](int step_idx) {
    if (!x.allFinite()) throw SolverError("path diverged");
    Snapshot s = sample_statistics(x);
    traj.times.push_back(step_idx * dt);
    traj.matrices.push_back(std::move(s.cov));
    traj.means.push_back(std::move(s.mean));
    traj.mean_norm.push_back(s.mean_norm);
    traj.second_norm.push_back(s.second_norm);
    traj.ball_radius = std::max(traj.ball_radius, s.max_abs);
  };

  std::size_t next_record = 0;
  if (record[next_record] == 0) {
    record_snapshot(0);
    ++next_record;
  }
  for (int step = 0; step < steps; ++step) {
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index c = 0; c < r; ++c) {
        dw(p, c) = sqrt_dt * rng.normal(static_cast<std::uint64_t>(p),
                                        static_cast<std::uint64_t>(step),
                                        static_cast<std::uint64_t>(c));
      }
    }
    op.apply(x, drift);
    if (nonlinear) add_remainder(sys.problem.nonlinearity, sys.u_star, x, drift);
    x += dt * drift;
    x.noalias() += dw * bt;
    if (next_record < record.size() && record[next_record] == step + 1) {
      record_snapshot(step + 1);
      ++next_record;
    }
  }
  return traj;
}

}  // namespace

SymMatrix sample_covariance(const Eigen::MatrixXd& states, Eigen::Index block) {
  if (states.rows() < 2) {
    throw DomainError("sample_covariance: need at least two paths");
  }
  if (block < 1) throw DomainError("sample_covariance: block must be positive");
  const Eigen::VectorXd mean = block_mean(states, block);
  Eigen::MatrixXd gram = centered_gram(states, mean, block);
  gram /= static_cast<double>(states.rows() - 1);
  gram.triangularView<Eigen::StrictlyUpper>() =
      gram.triangularView<Eigen::StrictlyLower>().transpose();
  return SymMatrix(std::move(gram));
}

CovarianceTrajectory simulate_nonlinear(const DiscretizedSystem& sys,
                                        const SimConfig& cfg) {
  return simulate(sys, cfg, true);
}

CovarianceTrajectory simulate_linear(const DiscretizedSystem& sys,
                                     const SimConfig& cfg) {
  return simulate(sys, cfg, false);
}

CovarianceTrajectory ode_covariance(const DiscretizedSystem& sys, const SymMatrix& v0,
                                    double T, int steps) {
  if (steps < 1) throw DomainError("ode_covariance: need at least one step");
  if (v0.n() != sys.script_A.n()) throw DomainError("ode_covariance: dimension mismatch");
  const Eigen::MatrixXd& a = sys.script_A.m();
  const Eigen::MatrixXd bbt = sys.B.m() * sys.B.m().transpose();
  const double dt = T / steps;

  auto rhs = [&](const Eigen::MatrixXd& v) -> Eigen::MatrixXd {
    Eigen::MatrixXd av = a * v;
    return av + av.transpose() + bbt;
  };

  const int n_out = std::min(kMaxOutputPoints, steps + 1);
  std::vector<int> record;
  for (int k = 0; k < n_out; ++k) {
    const int idx = static_cast<int>(
        std::llround(static_cast<double>(k) * steps / (n_out - 1)));
    if (record.empty() || idx > record.back()) record.push_back(idx);
  }

  CovarianceTrajectory traj;
  traj.source = TrajectorySource::ode_exact;
  Eigen::MatrixXd v = v0.m();
  std::size_t next_record = 0;
  if (record[next_record] == 0) {
    traj.times.push_back(0.0);
    traj.matrices.push_back(SymMatrix::symmetrized(v));
    ++next_record;
  }
  for (int step = 0; step < steps; ++step) {
    const Eigen::MatrixXd k1 = rhs(v);
    const Eigen::MatrixXd k2 = rhs(v + 0.5 * dt * k1);
    const Eigen::MatrixXd k3 = rhs(v + 0.5 * dt * k2);
    const Eigen::MatrixXd k4 = rhs(v + dt * k3);
    v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    v = 0.5 * (v + v.transpose().eval());
    if (next_record < record.size() && record[next_record] == step + 1) {
      traj.times.push_back((step + 1) * dt);
      traj.matrices.push_back(SymMatrix::symmetrized(v));
      ++next_record;
    }
  }
  return traj;
}

EtaCurve estimate_eta(const DiscretizedSystem& sys, const CovarianceTrajectory& nl) {
  if (nl.source != TrajectorySource::mc_nonlinear || nl.means.empty() ||
      nl.mean_norm.size() != nl.times.size()) {
    throw DomainError("estimate_eta: missing path statistics");
  }
  const EigDecomposition eig = sym_eig(sys.script_A);
  const Eigen::Index n = eig.eigenvalues.size();

  EtaCurve curve;
  curve.ingredients.c_f = sys.problem.nonlinearity.remainder_lipschitz(
      nl.ball_radius, sys.u_star);
  curve.ingredients.c_g = 0.0;  // additive noise: the noise remainder vanishes
  curve.ingredients.norm_A = spectral_norm(sys.script_A);
  curve.ingredients.upsilon = sys.upsilon;
  curve.ingredients.mean_norm = nl.mean_norm;
  curve.ingredients.second_norm = nl.second_norm;
  curve.times = nl.times;

  const double lr = curve.ingredients.c_f;
  const double noise_term =
      curve.ingredients.c_g * sys.upsilon * sys.upsilon;
  for (std::size_t t = 0; t < nl.times.size(); ++t) {
    const Eigen::VectorXd mu_hat = eig.eigenvectors.transpose() * nl.means[t];
    // b_i = L_r (|mu_i| E||z|| + E||z||^2) / |lambda_i|; the maximum of
    // eta_ij = b_i + b_j + c_g ups^2 is the sum of the two largest b_i.
    double top1 = 0.0;
    double top2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double bi = lr *
                        (std::abs(mu_hat(i)) * nl.mean_norm[t] + nl.second_norm[t]) /
                        std::abs(eig.eigenvalues(i));
      if (bi > top1) {
        top2 = top1;
        top1 = bi;
      } else if (bi > top2) {
        top2 = bi;
      }
    }
    curve.eta_max.push_back(n > 1 ? top1 + top2 + noise_term : top1 + noise_term);
  }
  curve.eta_star.resize(curve.times.size(), 0.0);
  for (std::size_t t = 1; t < curve.times.size(); ++t) {
    const double dt = curve.times[t] - curve.times[t - 1];
    curve.eta_star[t] = curve.eta_star[t - 1] +
                        0.5 * dt * (curve.eta_max[t] + curve.eta_max[t - 1]);
  }
  return curve;
}

GapReport linearization_gap(const DiscretizedSystem& sys,
                            const CovarianceTrajectory& nl,
                            const CovarianceTrajectory& lin) {
  if (nl.times.size() != lin.times.size() || nl.times != lin.times) {
    throw DomainError("linearization_gap: grid mismatch");
  }
  GapReport report;
  report.times = nl.times;
  report.eta = estimate_eta(sys, nl);
  report.rate_single = decay_rate_spectral(sys.script_A);
  report.rate_double = 2.0 * report.rate_single;
  report.eta_star = report.eta.eta_star;

  for (std::size_t t = 0; t < nl.times.size(); ++t) {
    report.gap.push_back(
        spectral_norm(SymMatrix(nl.matrices[t].m() - lin.matrices[t].m())));
  }
  const double gap0 = report.gap.front();

  auto envelope = [&](double rate, std::size_t t) {
    return (gap0 + report.eta_star[t]) * std::exp(-rate * report.times[t]);
  };
  auto fit = [&](double rate, std::size_t upto) {
    double c = 0.0;
    for (std::size_t t = 0; t < upto; ++t) {
      const double env = envelope(rate, t);
      if (env > 0.0) c = std::max(c, report.gap[t] / env);
    }
    return c;
  };

  const std::size_t half = report.times.size() / 2;
  for (int which = 0; which < 2; ++which) {
    const double rate = which == 0 ? report.rate_single : report.rate_double;
    const double c_full = fit(rate, report.times.size());
    const double c_half = fit(rate, std::max<std::size_t>(half, 2));
    bool ok = true;
    for (std::size_t t = 0; t < report.times.size(); ++t) {
      const double env = envelope(rate, t);
      if (report.gap[t] > 1.5 * c_half * env + 1e-300) {
        ok = false;
        break;
      }
    }
    if (which == 0) {
      report.c_l_single = c_full;
      report.single_rate_ok = ok;
      for (std::size_t t = 0; t < report.times.size(); ++t) {
        report.bound_single_rate.push_back(c_full * envelope(rate, t));
      }
    } else {
      report.c_l_double = c_full;
      report.double_rate_ok = ok;
      for (std::size_t t = 0; t < report.times.size(); ++t) {
        report.bound_double_rate.push_back(c_full * envelope(rate, t));
      }
    }
  }
  return report;
}

}  // namespace spdecov
