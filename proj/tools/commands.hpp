// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "spdecov/config.hpp"

namespace spdecov::cli {

void cmd_shifts(const RunConfig& cfg);
void cmd_solve(const RunConfig& cfg);
void cmd_bounds(const RunConfig& cfg);
void cmd_validate(const RunConfig& cfg);
void cmd_ceres(const RunConfig& cfg);

}  // namespace spdecov::cli
