// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spdecov/discretize.hpp"
#include "spdecov/lradi.hpp"
#include "spdecov/mc.hpp"

namespace spdecov {

enum class OutputFormat { csv, json };

/// Full run configuration, one JSON document. See README for the schema.
struct RunConfig {
  ProblemSpec problem;

  // discretization
  int N = 0;                      ///< single-level runs
  std::vector<int> levels;        ///< refinement studies
  int reference_level = 0;
  Discretization scheme = Discretization::finite_difference;

  SimConfig sim;

  // adi
  int adi_steps = 20;
  double adi_residual_tol = 1e-10;
  ShiftSource shift_source = ShiftSource::wachspress;
  std::vector<double> user_shift_values;
  std::optional<std::pair<double, double>> shift_interval;  ///< overrides the operator

  std::string output_dir = "out";
  OutputFormat format = OutputFormat::csv;
};

/// Parses and validates; throws DomainError with a line-level message on
/// malformed input, IoError if the file cannot be read.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

}  // namespace spdecov
