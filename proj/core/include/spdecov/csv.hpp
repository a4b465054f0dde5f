// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace spdecov {

/// Minimal deterministic CSV writer: a version line, one header row, then
/// numeric rows printed with "%.17g" so equal inputs give equal bytes.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  void write(const std::string& path) const;
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

/// Writes text to a file, creating parent directories. Throws IoError.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace spdecov
