// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "spdecov/bounds.hpp"
#include "spdecov/ceres.hpp"
#include "spdecov/csv.hpp"
#include "spdecov/errors.hpp"

namespace spdecov::cli {

namespace {

using nlohmann::json;

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

void write_json(const RunConfig& cfg, const std::string& name, const json& j) {
  write_text_file(out_path(cfg, name), j.dump(2) + "\n");
}

SpectralInterval resolve_interval(const RunConfig& cfg, const DiscretizedSystem* sys) {
  if (cfg.shift_interval) {
    return {cfg.shift_interval->first, cfg.shift_interval->second};
  }
  if (sys == nullptr) {
    throw DomainError("config: adi.interval required when no operator is built");
  }
  return spectral_interval(sys->script_A);
}

ShiftSet resolve_shifts(const RunConfig& cfg, const SpectralInterval& interval) {
  if (cfg.shift_source == ShiftSource::wachspress) {
    return wachspress_shifts(interval, cfg.adi_steps);
  }
  ShiftSet s = user_shifts(cfg.user_shift_values);
  s.interval = interval;
  return s;
}

int rk4_steps(const DiscretizedSystem& sys, double T) {
  const double lam_max = spectral_norm(sys.script_A);
  const int steps = static_cast<int>(std::ceil(T * 2.0 * lam_max / 2.5));
  return std::clamp(steps, 1, 2'000'000);
}

double fit_decay_rate(const CovarianceTrajectory& traj, const SymMatrix& v_star) {
  std::vector<double> ts, ys;
  for (std::size_t t = traj.times.size() / 2; t < traj.times.size(); ++t) {
    const double d = spectral_norm(SymMatrix(traj.matrices[t].m() - v_star.m()));
    if (d > 0.0) {
      ts.push_back(traj.times[t]);
      ys.push_back(std::log(d));
    }
  }
  if (ts.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sx += ts[i];
    sy += ys[i];
    sxx += ts[i] * ts[i];
    sxy += ts[i] * ys[i];
  }
  const double n = static_cast<double>(ts.size());
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

void cmd_shifts(const RunConfig& cfg) {
  const bool need_operator = !cfg.shift_interval.has_value();
  DiscretizedSystem sys;
  if (need_operator) {
    if (cfg.N < 1) throw DomainError("config: shifts needs discretization.N or adi.interval");
    sys = build_system(cfg.problem, cfg.N, cfg.scheme);
  }
  const SpectralInterval interval = resolve_interval(cfg, need_operator ? &sys : nullptr);
  const ShiftSet shifts = resolve_shifts(cfg, interval);
  const ThetaTable table = theta_bound(shifts, interval);

  CsvWriter csv({"i", "alpha_i", "rho_i", "theta_j", "bound_j"});
  for (std::size_t i = 0; i < shifts.shifts.size(); ++i) {
    csv.add_row({static_cast<double>(i + 1), shifts.shifts[i], table.rho[i],
                 table.theta[i],
                 theoretical_error_bound(interval, static_cast<int>(i + 1))});
  }
  csv.write(out_path(cfg, "shifts.csv"));

  std::printf("interval [%.6g, %.6g], kappa = %.6g\n", interval.a, interval.b,
              interval.kappa());
  std::printf("%4s %16s %12s %12s %12s\n", "i", "alpha_i", "rho_i", "theta_j",
              "bound");
  for (std::size_t i = 0; i < shifts.shifts.size(); ++i) {
    std::printf("%4zu %16.8e %12.5e %12.5e %12.5e\n", i + 1, shifts.shifts[i],
                table.rho[i], table.theta[i],
                theoretical_error_bound(interval, static_cast<int>(i + 1)));
  }
}

void cmd_solve(const RunConfig& cfg) {
  if (cfg.N < 1) throw DomainError("config: solve needs discretization.N");
  const DiscretizedSystem sys = build_system(cfg.problem, cfg.N, cfg.scheme);
  const SpectralInterval interval = resolve_interval(cfg, &sys);
  const ShiftSet shifts = resolve_shifts(cfg, interval);
  const LowRankSolution lr =
      lr_adi_run(sys.script_A, sys.B, shifts, {cfg.adi_steps, cfg.adi_residual_tol});

  const double ref = sys.upsilon * sys.upsilon;
  CsvWriter hist({"j", "residual", "relative_residual", "theta_j"});
  for (std::size_t m = 0; m < lr.residual_history.size(); ++m) {
    hist.add_row({static_cast<double>(m + 1), lr.residual_history[m],
                  lr.residual_history[m] / ref,
                  m < lr.theta_history.size() ? lr.theta_history[m] : 0.0});
  }
  hist.write(out_path(cfg, "residual_history.csv"));

  if (cfg.format == OutputFormat::csv) {
    std::vector<std::string> cols;
    for (Eigen::Index c = 0; c < lr.Z.cols(); ++c) {
      cols.push_back("z" + std::to_string(c + 1));
    }
    CsvWriter zcsv(cols);
    for (Eigen::Index i = 0; i < lr.Z.rows(); ++i) {
      std::vector<double> row(static_cast<std::size_t>(lr.Z.cols()));
      for (Eigen::Index c = 0; c < lr.Z.cols(); ++c) {
        row[static_cast<std::size_t>(c)] = lr.Z.m()(i, c);
      }
      zcsv.add_row(row);
    }
    zcsv.write(out_path(cfg, "factor_Z.csv"));
  } else {
    // raw little-endian doubles, column-major, after two int64 dimensions
    const std::string path = out_path(cfg, "factor_Z.bin");
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream bin(path, std::ios::binary);
    if (!bin) throw IoError("cannot open " + path + " for writing");
    const std::int64_t dims[2] = {lr.Z.rows(), lr.Z.cols()};
    bin.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    bin.write(reinterpret_cast<const char*>(lr.Z.m().data()),
              static_cast<std::streamsize>(sizeof(double) * lr.Z.m().size()));
    if (!bin) throw IoError("write failed: " + path);
  }

  json summary;
  summary["N"] = sys.N;
  summary["R"] = static_cast<int>(sys.B.cols());
  summary["h"] = sys.h;
  summary["upsilon"] = sys.upsilon;
  summary["steps"] = lr.steps;
  summary["final_residual"] = lr.residual_history.back();
  summary["relative_residual"] = lr.residual_history.back() / ref;
  summary["theta_bound"] = theoretical_error_bound(interval, lr.steps);
  summary["interval"] = {interval.a, interval.b};
  write_json(cfg, "solve_summary.json", summary);
  std::printf("solve: N=%d R=%d steps=%d relative residual %.3e\n", sys.N,
              static_cast<int>(sys.B.cols()), lr.steps,
              lr.residual_history.back() / ref);
}

void cmd_bounds(const RunConfig& cfg) {
  if (cfg.N < 1) throw DomainError("config: bounds needs discretization.N");
  if (cfg.N > 1000) {
    throw DomainError(
        "config: bounds is a dense desk-scale check, use N <= 1000 "
        "(the low-rank pipeline handles larger problems)");
  }
  const DiscretizedSystem sys = build_system(cfg.problem, cfg.N, cfg.scheme);
  const DecayReport report = verify_decay(sys.script_A, sys.B);

  const double sigma1 = report.singular_values(0);
  CsvWriter csv({"index", "sigma", "penzl", "sabino"});
  for (std::size_t r = 0; r < report.penzl.size(); ++r) {
    const int idx = report.noise_rank * static_cast<int>(r + 1) + 1;
    csv.add_row({static_cast<double>(idx), report.singular_values(idx - 1) / sigma1,
                 report.penzl[r], report.sabino[r]});
  }
  csv.write(out_path(cfg, "decay.csv"));

  json summary;
  summary["N"] = sys.N;
  summary["R"] = report.noise_rank;
  summary["all_hold"] = report.all_hold;
  summary["violations"] = report.violations;
  summary["sigma_1"] = sigma1;
  write_json(cfg, "decay_summary.json", summary);
  std::printf("bounds: N=%d R=%d, %s\n", sys.N, report.noise_rank,
              report.all_hold ? "all inequalities hold" : "VIOLATIONS FOUND");
  if (!report.all_hold) throw SolverError("singular-value bound violated");
}

void cmd_validate(const RunConfig& cfg) {
  if (cfg.N < 1) throw DomainError("config: validate needs discretization.N");
  const DiscretizedSystem sys = build_system(cfg.problem, cfg.N, cfg.scheme);
  const CovarianceTrajectory nl = simulate_nonlinear(sys, cfg.sim);
  const CovarianceTrajectory lin = simulate_linear(sys, cfg.sim);
  const GapReport gap = linearization_gap(sys, nl, lin);

  CsvWriter gap_csv({"t", "gap", "eta_star", "bound_rate_min", "bound_rate_2min"});
  for (std::size_t t = 0; t < gap.times.size(); ++t) {
    gap_csv.add_row({gap.times[t], gap.gap[t], gap.eta_star[t],
                     gap.bound_single_rate[t], gap.bound_double_rate[t]});
  }
  gap_csv.write(out_path(cfg, "validate_gap.csv"));

  const SymMatrix v_star = dense_lyapunov(sys.script_A, sys.B);
  const CovarianceTrajectory ode = ode_covariance(
      sys, SymMatrix::zero(sys.N), cfg.sim.T, rk4_steps(sys, cfg.sim.T));
  CsvWriter ode_csv({"t", "dist_to_stationary"});
  for (std::size_t t = 0; t < ode.times.size(); ++t) {
    ode_csv.add_row({ode.times[t], spectral_norm(SymMatrix(
                                       ode.matrices[t].m() - v_star.m()))});
  }
  ode_csv.write(out_path(cfg, "validate_ode.csv"));

  json summary;
  summary["sup_gap"] = *std::max_element(gap.gap.begin(), gap.gap.end());
  summary["c_l_rate_min"] = gap.c_l_single;
  summary["c_l_rate_2min"] = gap.c_l_double;
  summary["rate_min"] = gap.rate_single;
  summary["rate_2min"] = gap.rate_double;
  summary["rate_min_ok"] = gap.single_rate_ok;
  summary["rate_2min_ok"] = gap.double_rate_ok;
  summary["c_f_remainder"] = gap.eta.ingredients.c_f;
  summary["c_g"] = gap.eta.ingredients.c_g;
  summary["fitted_ode_rate"] = fit_decay_rate(ode, v_star);
  summary["decay_rate_spectral"] = decay_rate_spectral(sys.script_A);
  summary["decay_rate_H"] = decay_rate_H(sys.script_A);
  write_json(cfg, "validate_summary.json", summary);
  std::printf("validate: sup gap %.6e, fitted C_l %.6e, ode rate %.6e\n",
              summary["sup_gap"].get<double>(), gap.c_l_single,
              summary["fitted_ode_rate"].get<double>());
}

void cmd_ceres(const RunConfig& cfg) {
  if (cfg.levels.empty()) throw DomainError("config: ceres needs discretization.levels");
  if (cfg.N < 1) throw DomainError("config: ceres needs discretization.N");
  const bool covered = cfg.N == cfg.reference_level ||
                       std::find(cfg.levels.begin(), cfg.levels.end(), cfg.N) !=
                           cfg.levels.end();
  if (!covered) {
    throw DomainError("config: ceres needs N in levels or equal to the reference");
  }

  const OrderStudy study =
      galerkin_order_study(cfg.problem, cfg.levels, cfg.reference_level, cfg.scheme);
  const DiscretizedSystem sys = build_system(cfg.problem, cfg.N, cfg.scheme);
  const CovarianceTrajectory nl = simulate_nonlinear(sys, cfg.sim);
  const CovarianceTrajectory lin = simulate_linear(sys, cfg.sim);
  const GapReport gap = linearization_gap(sys, nl, lin);
  const CovarianceTrajectory ode = ode_covariance(
      sys, SymMatrix::zero(sys.N), cfg.sim.T, rk4_steps(sys, cfg.sim.T));
  const ShiftSet shifts = resolve_shifts(cfg, spectral_interval(sys.script_A));
  const LowRankSolution lr =
      lr_adi_run(sys.script_A, sys.B, shifts, {cfg.adi_steps, cfg.adi_residual_tol});
  const CeresBudget budget = assemble_budget(sys, study, gap, ode, lr, cfg.sim.T);

  const ErrorTerm* terms[4] = {&budget.s1, &budget.s2, &budget.s3, &budget.s4};
  const char* names[4] = {"err_s1", "err_s2", "err_s3", "err_s4"};
  std::string csv = "# spdecov csv v1\nterm,bound,measured,dominant_flag\n";
  char line[128];
  for (int i = 0; i < 4; ++i) {
    std::snprintf(line, sizeof(line), "%s,%.17g,%.17g,%d\n", names[i],
                  terms[i]->bound, terms[i]->measured,
                  budget.dominant == names[i] ? 1 : 0);
    csv += line;
  }
  write_text_file(out_path(cfg, "ceres.csv"), csv);

  json j;
  j["err_s1"] = {{"bound", budget.s1.bound},
                 {"measured", budget.s1.measured},
                 {"C_d", budget.c_d},
                 {"r", budget.r},
                 {"h", sys.h},
                 {"observed_order", study.observed_order},
                 {"study_monotone", study.monotone}};
  j["err_s2"] = {{"bound", budget.s2.bound},
                 {"measured", budget.s2.measured},
                 {"C_l", budget.c_l},
                 {"rate", budget.rate_s2}};
  j["err_s3"] = {{"bound", budget.s3.bound},
                 {"measured", budget.s3.measured},
                 {"C_tau", budget.c_tau},
                 {"rate", budget.rate_s3}};
  j["err_s4"] = {{"bound", budget.s4.bound},
                 {"measured", budget.s4.measured},
                 {"steps", lr.steps}};
  j["total_bound"] = budget.total_bound;
  j["total_measured"] = budget.total_measured;
  j["dominant"] = budget.dominant;
  j["consistent"] = budget.consistent;
  j["v_star_norm"] = budget.v_star_norm;
  j["horizon"] = budget.horizon;
  write_json(cfg, "ceres.json", j);

  std::printf("ceres: total bound %.6e, total measured %.6e, dominant %s%s\n",
              budget.total_bound, budget.total_measured, budget.dominant.c_str(),
              budget.consistent ? "" : " (INCONSISTENT)");
}

}  // namespace spdecov::cli
