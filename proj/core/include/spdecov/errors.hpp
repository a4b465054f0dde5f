// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace spdecov {

/// Base class for all spdecov errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument or configuration value (violated precondition).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// A stability assumption does not hold (operator not negative definite,
/// explicit step size too large, ...).
class StabilityError : public Error {
 public:
  explicit StabilityError(const std::string& what) : Error(what) {}
};

/// A numerical procedure failed (no convergence, factorization breakdown,
/// divergent iteration).
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(what) {}
};

/// File system / serialization failure.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace spdecov
