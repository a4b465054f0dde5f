// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#include "spdecov/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spdecov/errors.hpp"

namespace spdecov {

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size()) {
    throw DomainError("CsvWriter: row width does not match header");
  }
  rows_.push_back(values);
}

std::string CsvWriter::str() const {
  std::ostringstream out;
  out << "# spdecov csv v1\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    out << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
  }
  char buf[64];
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      out << buf << (i + 1 < row.size() ? "," : "\n");
    }
  }
  return out.str();
}

void CsvWriter::write(const std::string& path) const { write_text_file(path, str()); }

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + p.parent_path().string());
  }
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace spdecov
