#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "splam/experiments.hpp"

namespace splam {

struct LoadedData {
  Dataset data;
  std::vector<std::string> feature_names;
};

namespace detail {

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

/// RFC-4180-style field splitting: quoted fields may contain commas and
/// doubled quotes.
inline std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(cur);
  return fields;
}

inline double parse_number(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": cannot parse number '" + s +
                             "'");
  }
}

}  // namespace detail

/// CSV with a required header row; the last column is the response.
inline LoadedData read_csv(std::istream& in) {
  LoadedData out;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw std::runtime_error("empty input: missing header row");
  ++line_no;
  const auto header = detail::split_csv_line(detail::strip_cr(line), line_no);
  if (header.size() < 2) {
    throw std::runtime_error("header must name at least one feature and the response");
  }
  out.feature_names.assign(header.begin(), header.end() - 1);
  const std::size_t width = header.size();
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line, line_no);
    if (fields.size() != width) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(width) + " fields, got " +
                               std::to_string(fields.size()));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) row[c] = detail::parse_number(fields[c], line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("no data rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(width - 1);
  out.data.X.resize(n, p);
  out.data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      out.data.X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    out.data.y[i] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
  }
  return out;
}

/// svmlight / libsvm text format: "label index:value ..." with 1-based
/// indices (out-of-order pairs allowed) and optional # comments. Features
/// absent from a row are zero; the dense width is the largest index seen.
inline LoadedData read_svmlight(std::istream& in) {
  std::vector<double> labels;
  std::vector<std::vector<std::pair<int, double>>> sparse_rows;
  std::string line;
  std::size_t line_no = 0;
  int max_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(line);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double label;
    if (!(ls >> label)) continue;  // blank or comment-only line
    std::vector<std::pair<int, double>> row;
    std::string tok;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected index:value, got '" +
                                 tok + "'");
      }
      int idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoi(tok.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": bad feature index in '" +
                                 tok + "'");
      }
      if (idx < 1) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": feature indices are 1-based");
      }
      const double value = detail::parse_number(tok.substr(colon + 1), line_no);
      row.emplace_back(idx, value);
      max_index = std::max(max_index, idx);
    }
    labels.push_back(label);
    sparse_rows.push_back(std::move(row));
  }
  if (labels.empty()) throw std::runtime_error("no data rows");
  if (max_index == 0) throw std::runtime_error("no features present in input");
  LoadedData out;
  const auto n = static_cast<Eigen::Index>(labels.size());
  out.data.X = Mat::Zero(n, max_index);
  out.data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.data.y[i] = labels[static_cast<std::size_t>(i)];
    for (const auto& [idx, value] : sparse_rows[static_cast<std::size_t>(i)]) {
      out.data.X(i, idx - 1) = value;
    }
  }
  out.feature_names.resize(static_cast<std::size_t>(max_index));
  for (int j = 0; j < max_index; ++j) {
    out.feature_names[static_cast<std::size_t>(j)] = "x" + std::to_string(j + 1);
  }
  return out;
}

enum class DataFormat { csv, svmlight };

inline LoadedData read_data(const std::string& path, DataFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return format == DataFormat::csv ? read_csv(in) : read_svmlight(in);
}

/// Guesses the format from the extension; anything but .csv is treated as
/// svmlight.
inline DataFormat guess_format(const std::string& path) {
  const auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == "csv" ? DataFormat::csv : DataFormat::svmlight;
}

}  // namespace splam
