// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spdecov/bounds.hpp"
#include "spdecov/ceres.hpp"
#include "spdecov/errors.hpp"

using namespace spdecov;

namespace {

ProblemSpec heat_spec(double upsilon) {
  ProblemSpec spec;
  spec.length = 1.0;
  spec.nonlinearity = Nonlinearity::linear(0.1);
  spec.upsilon = upsilon;
  spec.gamma = 2.0;
  spec.noise_rank = 4;
  return spec;
}

struct Stage {
  DiscretizedSystem sys;
  GapReport gap;
  CovarianceTrajectory ode;
  LowRankSolution lr;
};

Stage run_stages(const ProblemSpec& spec, int n, int adi_steps, double T) {
  Stage st;
  st.sys = build_system(spec, n);
  SimConfig cfg;
  cfg.T = T;
  cfg.M = 64;
  cfg.seed = 11;
  cfg.output_points = 40;
  const auto nl = simulate_nonlinear(st.sys, cfg);
  const auto lin = simulate_linear(st.sys, cfg);
  st.gap = linearization_gap(st.sys, nl, lin);
  const double lam_max = spectral_norm(st.sys.script_A);
  const int steps = static_cast<int>(std::ceil(T * 2.0 * lam_max / 2.5));
  st.ode = ode_covariance(st.sys, SymMatrix::zero(n), T, steps);
  const auto shifts = wachspress_shifts(spectral_interval(st.sys.script_A), adi_steps);
  st.lr = lr_adi_run(st.sys.script_A, st.sys.B, shifts, {adi_steps, 0.0});
  return st;
}

}  // namespace

TEST_CASE("galerkin_order_study on the heat equation") {
  const auto study = galerkin_order_study(heat_spec(0.1), {25, 50, 100}, 401);
  CHECK(study.monotone);
  CHECK(study.observed_order >= 1.5);
  CHECK(study.observed_order <= 2.5);
  CHECK(study.r == doctest::Approx(std::min(study.observed_order - 1.0, 0.999)));
  // envelope constant covers every studied level
  for (std::size_t i = 0; i < study.errors.size(); ++i) {
    CHECK(study.errors[i] <=
          study.c_d * std::pow(study.h[i], 1.0 + study.r) * (1.0 + 1e-12));
  }
  // consecutive-level error ratios near the h^2 prediction
  for (std::size_t i = 0; i + 1 < study.errors.size(); ++i) {
    const double ratio = study.errors[i] / study.errors[i + 1];
    CHECK(ratio >= 2.0);
    CHECK(ratio <= 4.6);
  }
  CHECK_THROWS_AS(galerkin_order_study(heat_spec(0.1), {25, 50}, 401), DomainError);
  CHECK_THROWS_AS(galerkin_order_study(heat_spec(0.1), {25, 50, 100}, 150),
                  DomainError);
  CHECK_THROWS_AS(galerkin_order_study(heat_spec(0.1), {50, 25, 100}, 401),
                  DomainError);
}

TEST_CASE("spectral scheme reproduces the reference covariance") {
  // exact modal eigenvalues at every level: errors at roundoff
  const auto study = galerkin_order_study(heat_spec(0.1), {8, 16, 32}, 65,
                                          Discretization::spectral);
  for (double e : study.errors) CHECK(e <= 1e-12);
}

TEST_CASE("budget: degenerate pipeline has tiny measured terms") {
  const ProblemSpec spec = heat_spec(1e-3);
  const auto study = galerkin_order_study(spec, {5, 8, 12}, 25);
  const auto st = run_stages(spec, 25, 20, 1.0);
  const auto budget = assemble_budget(st.sys, study, st.gap, st.ode, st.lr, 1.0);

  CHECK(budget.consistent);
  const double scale = budget.v_star_norm;
  CHECK(budget.s1.measured == 0.0);  // system at the reference level
  CHECK(budget.s2.measured <= 1e-8 * scale);
  CHECK(budget.s3.measured <= 1e-8 * scale);
  CHECK(budget.s4.measured <= 1e-8 * scale);
  CHECK(budget.total_measured <= budget.total_bound);
  // exact triangle-inequality identity
  CHECK(budget.total_bound == budget.s1.bound + budget.s2.bound + budget.s3.bound +
                                  budget.s4.bound);
}

TEST_CASE("budget: dominant term moves from err_s4 to err_s1 with j") {
  const ProblemSpec spec = heat_spec(1e-3);
  const auto study = galerkin_order_study(spec, {5, 8, 12}, 25);

  const auto coarse_few = run_stages(spec, 8, 2, 1.0);
  const auto b1 = assemble_budget(coarse_few.sys, study, coarse_few.gap,
                                  coarse_few.ode, coarse_few.lr, 1.0);
  CHECK(b1.dominant == "err_s4");
  CHECK(b1.consistent);

  const auto coarse_many = run_stages(spec, 8, 12, 1.0);
  const auto b2 = assemble_budget(coarse_many.sys, study, coarse_many.gap,
                                  coarse_many.ode, coarse_many.lr, 1.0);
  CHECK(b2.dominant == "err_s1");
  CHECK(b2.consistent);
  // monotone control: the s4 bound fell, the s1 term is unchanged
  CHECK(b2.s4.bound < b1.s4.bound);
  CHECK(b2.s1.bound == doctest::Approx(b1.s1.bound));
  // measured s1 matches the study entry for the coarse level
  CHECK(b1.s1.measured == doctest::Approx(study.errors[1]));
}

TEST_CASE("budget rejects a level outside the study") {
  const ProblemSpec spec = heat_spec(1e-3);
  const auto study = galerkin_order_study(spec, {5, 8, 12}, 25);
  const auto st = run_stages(spec, 10, 4, 0.5);
  CHECK_THROWS_AS(assemble_budget(st.sys, study, st.gap, st.ode, st.lr, 0.5),
                  DomainError);
}

TEST_CASE("budget: err_s3 bound decreases in the horizon") {
  const ProblemSpec spec = heat_spec(1e-3);
  const auto study = galerkin_order_study(spec, {5, 8, 12}, 25);
  double prev = std::numeric_limits<double>::infinity();
  for (double T : {0.25, 0.5, 1.0}) {
    const auto st = run_stages(spec, 8, 6, T);
    const auto budget = assemble_budget(st.sys, study, st.gap, st.ode, st.lr, T);
    CHECK(budget.s3.bound < prev);
    prev = budget.s3.bound;
    CHECK(budget.rate_s3 >= decay_rate_spectral(st.sys.script_A));
  }
}
