// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#include "spdecov/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "spdecov/errors.hpp"

namespace spdecov {

namespace {

using nlohmann::json;

Nonlinearity parse_nonlinearity(const json& j) {
  const std::string type = j.value("type", "linear");
  if (type == "linear") {
    return Nonlinearity::linear(j.value("c", 0.0));
  }
  if (type == "cubic") {
    return Nonlinearity::cubic(j.value("mu", 1.0));
  }
  if (type == "logistic") {
    return Nonlinearity::logistic(j.value("mu", 1.0));
  }
  throw DomainError("config: unknown nonlinearity type '" + type + "'");
}

void validate(const RunConfig& cfg) {
  const ProblemSpec& p = cfg.problem;
  if (!(p.length > 0.0)) throw DomainError("config: problem.L must be positive");
  if (!(p.upsilon > 0.0)) throw DomainError("config: problem.upsilon must be positive");
  if (!(p.gamma >= 0.0)) throw DomainError("config: problem.gamma must be nonnegative");
  if (p.noise_rank < 1) throw DomainError("config: problem.R must be >= 1");
  if (cfg.N == 0 && cfg.levels.empty()) {
    throw DomainError("config: discretization needs N or levels");
  }
  if (cfg.N < 0) throw DomainError("config: discretization.N must be >= 1");
  if (cfg.N > 0 && p.noise_rank > cfg.N) {
    throw DomainError("config: problem.R exceeds discretization.N");
  }
  if (!cfg.levels.empty()) {
    if (cfg.levels.size() < 3) throw DomainError("config: need >= 3 levels");
    for (std::size_t i = 1; i < cfg.levels.size(); ++i) {
      if (cfg.levels[i] <= cfg.levels[i - 1]) {
        throw DomainError("config: levels must be increasing");
      }
    }
    if (cfg.reference_level < 2 * cfg.levels.back()) {
      throw DomainError("config: reference must be at least 2x the finest level");
    }
  }
  if (!(cfg.sim.T > 0.0)) throw DomainError("config: sim.T must be positive");
  if (cfg.sim.dt < 0.0) throw DomainError("config: sim.dt must be nonnegative");
  if (cfg.sim.M < 2) throw DomainError("config: sim.M must be >= 2");
  if (cfg.adi_steps < 1) throw DomainError("config: adi.j must be >= 1");
  if (!(cfg.adi_residual_tol > 0.0)) {
    throw DomainError("config: adi.residual_tol must be positive");
  }
  if (cfg.shift_source == ShiftSource::user && cfg.user_shift_values.empty()) {
    throw DomainError("config: adi.shifts = \"user\" needs adi.values");
  }
  for (double s : cfg.user_shift_values) {
    if (!(s < 0.0)) throw DomainError("config: user shifts must be negative");
  }
  if (cfg.shift_interval) {
    const auto [a, b] = *cfg.shift_interval;
    if (!(a <= b) || !(b < 0.0)) {
      throw DomainError("config: adi.interval must satisfy a <= b < 0");
    }
  }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("config: ") + e.what());
  }

  RunConfig cfg;
  try {
    if (j.contains("problem")) {
      const json& p = j["problem"];
      cfg.problem.length = p.value("L", 1.0);
      if (p.contains("nonlinearity")) {
        cfg.problem.nonlinearity = parse_nonlinearity(p["nonlinearity"]);
      }
      cfg.problem.upsilon = p.value("upsilon", 0.1);
      cfg.problem.gamma = p.value("gamma", 2.0);
      cfg.problem.noise_rank = p.value("R", 1);
      const std::string guess = p.value("steady_guess", "zero");
      if (guess == "zero") {
        cfg.problem.steady_guess = SteadyGuess::zero;
      } else if (guess == "bump") {
        cfg.problem.steady_guess = SteadyGuess::bump;
      } else {
        throw DomainError("config: unknown steady_guess '" + guess + "'");
      }
      const std::string boundary = p.value("boundary", "dirichlet");
      if (boundary != "dirichlet") {
        throw DomainError("config: only dirichlet boundaries are supported");
      }
    }
    if (j.contains("discretization")) {
      const json& d = j["discretization"];
      cfg.N = d.value("N", 0);
      if (d.contains("levels")) cfg.levels = d["levels"].get<std::vector<int>>();
      cfg.reference_level = d.value("reference", 0);
      const std::string scheme = d.value("scheme", "fd");
      if (scheme == "fd") {
        cfg.scheme = Discretization::finite_difference;
      } else if (scheme == "spectral") {
        cfg.scheme = Discretization::spectral;
      } else {
        throw DomainError("config: unknown scheme '" + scheme + "'");
      }
    }
    if (j.contains("sim")) {
      const json& s = j["sim"];
      cfg.sim.T = s.value("T", 1.0);
      cfg.sim.dt = s.value("dt", 0.0);
      cfg.sim.M = s.value("M", 1000);
      cfg.sim.seed = s.value("seed", 0ULL);
      cfg.sim.output_points = s.value("output_points", 100);
    }
    if (j.contains("adi")) {
      const json& a = j["adi"];
      cfg.adi_steps = a.value("j", 20);
      cfg.adi_residual_tol = a.value("residual_tol", 1e-10);
      const std::string src = a.value("shifts", "wachspress");
      if (src == "wachspress") {
        cfg.shift_source = ShiftSource::wachspress;
      } else if (src == "user") {
        cfg.shift_source = ShiftSource::user;
      } else {
        throw DomainError("config: unknown shift source '" + src + "'");
      }
      if (a.contains("values")) {
        cfg.user_shift_values = a["values"].get<std::vector<double>>();
      }
      if (a.contains("interval")) {
        const auto iv = a["interval"].get<std::vector<double>>();
        if (iv.size() != 2) throw DomainError("config: adi.interval needs [a,b]");
        cfg.shift_interval = std::make_pair(iv[0], iv[1]);
      }
    }
    if (j.contains("output")) {
      const json& o = j["output"];
      cfg.output_dir = o.value("dir", "out");
      const std::string fmt = o.value("format", "csv");
      if (fmt == "csv") {
        cfg.format = OutputFormat::csv;
      } else if (fmt == "json") {
        cfg.format = OutputFormat::json;
      } else {
        throw DomainError("config: unknown output format '" + fmt + "'");
      }
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace spdecov
