// csv.hpp — dataset ingestion, emission, and standardization.
//
// Format: comma-separated, header row, UTF-8, '.' decimal. Ingestion
// drops non-numeric columns whole (any unparseable non-missing cell) and
// drops rows with missing cells ("", "NA", "na", "?") in retained
// columns, counting them.
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "epg/dataset.hpp"

namespace epg {

struct CsvOptions {
  bool has_header = true;
  std::vector<std::string> column_names;    // used when has_header is false
  std::vector<std::string> select_columns;  // restrict to these names (after numeric filtering)
  std::vector<std::string> drop_columns;    // force-drop these names
};

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline bool is_missing(const std::string& cell) {
  std::string t;
  for (char c : cell)
    if (c != ' ' && c != '\t') t.push_back(c);
  return t.empty() || t == "NA" || t == "na" || t == "?";
}
}  // namespace detail

inline DataSet parse_csv(std::istream& in, const CsvOptions& options = {}) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(detail::split_csv_line(line));
  }
  if (rows.empty()) throw data_error("empty CSV");

  std::vector<std::string> names;
  std::size_t first_data_row = 0;
  const std::size_t width = rows[0].size();
  if (options.has_header) {
    names.assign(rows[0].begin(), rows[0].end());
    first_data_row = 1;
  } else if (!options.column_names.empty()) {
    names = options.column_names;
  } else {
    for (std::size_t c = 0; c < width; ++c) names.push_back("col" + std::to_string(c));
  }
  if (names.size() != width) throw data_error("column name count does not match CSV width");

  // Classify columns: any unparseable non-missing cell marks the column
  // non-numeric.
  std::vector<bool> numeric(width, true);
  for (std::size_t r = first_data_row; r < rows.size(); ++r) {
    if (rows[r].size() != width) throw data_error("ragged CSV row " + std::to_string(r + 1));
    for (std::size_t c = 0; c < width; ++c) {
      if (!numeric[c] || detail::is_missing(rows[r][c])) continue;
      double v;
      if (!parse_double(rows[r][c], v)) numeric[c] = false;
    }
  }

  auto wanted = [&](const std::string& name) {
    for (const auto& d : options.drop_columns)
      if (d == name) return false;
    if (options.select_columns.empty()) return true;
    for (const auto& s : options.select_columns)
      if (s == name) return true;
    return false;
  };

  DataSet d;
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < width; ++c) {
    if (numeric[c] && wanted(names[c])) {
      keep.push_back(c);
      d.column_names.push_back(names[c]);
    } else {
      d.preprocessing.dropped_columns.push_back(names[c]);
    }
  }
  if (keep.empty()) throw data_error("no numeric columns");

  d.dim = int(keep.size());
  for (std::size_t r = first_data_row; r < rows.size(); ++r) {
    bool missing = false;
    for (std::size_t c : keep)
      if (detail::is_missing(rows[r][c])) missing = true;
    if (missing) {
      ++d.preprocessing.dropped_rows;
      continue;
    }
    for (std::size_t c : keep) {
      double v;
      parse_double(rows[r][c], v);
      d.points.push_back(v);
    }
  }
  if (d.size() < 2) throw data_error("fewer than 2 usable rows");
  return d;
}

inline DataSet load_csv(const std::string& path, const CsvOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot read " + path);
  return parse_csv(in, options);
}

inline void write_csv(const DataSet& d, std::ostream& out) {
  for (int c = 0; c < d.dim; ++c) {
    if (c) out << ',';
    out << (c < int(d.column_names.size()) ? d.column_names[std::size_t(c)]
                                           : "col" + std::to_string(c));
  }
  out << '\n';
  for (long i = 0; i < d.size(); ++i) {
    auto x = d.point(i);
    for (int c = 0; c < d.dim; ++c) {
      if (c) out << ',';
      out << format_g17(x[std::size_t(c)]);
    }
    out << '\n';
  }
}

inline void write_csv(const DataSet& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path);
  write_csv(d, out);
}

// Centers every column to mean 0 and scales to unit standard deviation
// (divide-by-n). Zero-variance columns are dropped and recorded. The
// constants go into the preprocessing record so the transform inverts.
inline DataSet standardize(const DataSet& d) {
  if (d.size() < 2) throw data_error("standardize needs at least 2 rows");
  const long n = d.size();
  std::vector<double> mean(std::size_t(d.dim), 0.0), sd(std::size_t(d.dim), 0.0);
  for (long i = 0; i < n; ++i)
    for (int c = 0; c < d.dim; ++c) mean[std::size_t(c)] += d.points[std::size_t(i) * d.dim + c];
  for (auto& v : mean) v /= double(n);
  for (long i = 0; i < n; ++i)
    for (int c = 0; c < d.dim; ++c)
      sd[std::size_t(c)] += sq(d.points[std::size_t(i) * d.dim + c] - mean[std::size_t(c)]);
  for (auto& v : sd) v = std::sqrt(v / double(n));

  DataSet out;
  out.preprocessing = d.preprocessing;
  std::vector<int> keep;
  for (int c = 0; c < d.dim; ++c) {
    if (sd[std::size_t(c)] > 0.0) {
      keep.push_back(c);
      out.column_names.push_back(c < int(d.column_names.size()) ? d.column_names[std::size_t(c)]
                                                                : "col" + std::to_string(c));
      out.preprocessing.centers.push_back(mean[std::size_t(c)]);
      out.preprocessing.scales.push_back(sd[std::size_t(c)]);
    } else {
      out.preprocessing.dropped_columns.push_back(
          c < int(d.column_names.size()) ? d.column_names[std::size_t(c)] : "col" + std::to_string(c));
    }
  }
  if (keep.empty()) throw data_error("all columns have zero variance");
  out.dim = int(keep.size());
  out.preprocessing.standardized = true;
  out.points.reserve(std::size_t(n) * keep.size());
  for (long i = 0; i < n; ++i)
    for (int c : keep)
      out.points.push_back((d.points[std::size_t(i) * d.dim + c] - mean[std::size_t(c)]) /
                           sd[std::size_t(c)]);
  return out;
}

// Inverts standardize using the recorded constants.
inline DataSet unstandardize(const DataSet& d) {
  if (!d.preprocessing.standardized) return d;
  if (int(d.preprocessing.centers.size()) != d.dim)
    throw data_error("preprocessing record does not match dataset width");
  DataSet out = d;
  out.preprocessing.standardized = false;
  for (long i = 0; i < d.size(); ++i)
    for (int c = 0; c < d.dim; ++c)
      out.points[std::size_t(i) * d.dim + c] =
          d.points[std::size_t(i) * d.dim + c] * d.preprocessing.scales[std::size_t(c)] +
          d.preprocessing.centers[std::size_t(c)];
  return out;
}

}  // namespace epg
