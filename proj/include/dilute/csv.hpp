// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "dilute/errors.hpp"

namespace dilute {

// Shortest representation that round-trips exactly.
inline std::string format_double(double v) {
  char buf[64];
  if (v == 0.0) v = 0.0;  // drop the sign of zero
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw ParameterError("format_double: conversion failed");
  return std::string(buf, p);
}

using CsvCell = std::variant<double, long long, std::string>;

inline std::string format_cell(const CsvCell& c) {
  if (auto d = std::get_if<double>(&c)) return format_double(*d);
  if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<CsvCell> row) {
    if (row.size() != header_.size()) throw ParameterError("CsvTable: row width does not match header");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<CsvCell>>& rows() const { return rows_; }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
    out += "\n";
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_cell(r[i]);
      out += "\n";
    }
    return out;
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

// Plain-text gnuplot script plotting columns of a CSV against column x.
inline void write_gnuplot_script(const std::filesystem::path& path, const std::string& csv_name,
                                 const CsvTable& table, std::size_t x, const std::vector<std::size_t>& ys,
                                 bool logscale) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << "set datafile separator ','\nset key autotitle columnhead\n";
  if (logscale) f << "set logscale xy\n";
  f << "set xlabel '" << table.header().at(x) << "'\nplot ";
  for (std::size_t i = 0; i < ys.size(); ++i)
    f << (i ? ", " : "") << "'" << csv_name << "' using " << x + 1 << ":" << ys[i] + 1 << " with linespoints";
  f << "\n";
}

}  // namespace dilute
