#pragma once

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "pvopt/dynamics.hpp"

namespace pvopt {

// Locale-independent number rendering with a fixed number of significant
// digits; identical bytes on every run and platform.
inline std::string format_number(double v, int precision = 9) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline void write_table_csv(const Table& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  std::string line;
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    if (k > 0) line += ',';
    line += table.header[k];
  }
  line += '\n';
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  for (const auto& row : table.rows) {
    line.clear();
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) line += ',';
      line += format_number(row[k]);
    }
    line += '\n';
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

// Header exactly `t,I,E,D,S`; one row per sample; 9 significant digits;
// the S column is 0 for base-model runs.
inline void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  Table table;
  table.header = {"t", "I", "E", "D", "S"};
  table.rows.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    table.rows.push_back({traj.t[k], traj.i[k], traj.e[k], traj.d[k], traj.s[k]});
  }
  write_table_csv(table, path);
}

}  // namespace pvopt
