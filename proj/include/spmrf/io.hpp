#pragma once

#include <Eigen/Dense>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "spmrf/common.hpp"

namespace spmrf {

/// Headered comma-separated table with numeric cells.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<Eigen::VectorXd> data;  // one vector per column

  Eigen::Index rows() const { return data.empty() ? 0 : data.front().size(); }

  Eigen::Index column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return Eigen::Index(i);
    throw IoError("column not found: " + name);
  }

  const Eigen::VectorXd& column(const std::string& name) const {
    return data[std::size_t(column_index(name))];
  }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline double parse_double(const std::string& s, const std::string& context) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (*(last - 1) == ' ' || *(last - 1) == '\t' ||
                          *(last - 1) == '\r'))
    --last;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw IoError("cannot parse number '" + s + "' in " + context);
  return v;
}

}  // namespace detail

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.columns = detail::split_csv_line(line);
  require(!t.columns.empty(), "csv has no columns");
  std::vector<std::vector<double>> cols(t.columns.size());
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != t.columns.size())
      throw IoError(path + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(t.columns.size()) + " cells, got " +
                    std::to_string(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c)
      cols[c].push_back(detail::parse_double(
          cells[c], path + ":" + std::to_string(lineno)));
  }
  for (auto& c : cols)
    t.data.push_back(Eigen::Map<Eigen::VectorXd>(c.data(), Eigen::Index(c.size())));
  return t;
}

/// Full-precision formatting for machine-readable files: %.17g round-trips
/// every double exactly.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// 4-significant-figure formatting for human reports.
inline std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::trunc) {
    if (!out_) throw IoError("cannot write " + path);
  }
  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      out_ << (i ? "," : "") << cols[i];
    out_ << '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

}  // namespace spmrf
