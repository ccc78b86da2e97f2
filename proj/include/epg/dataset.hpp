// dataset.hpp — point sets and their summary statistics.
#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "epg/common.hpp"

namespace epg {

// Record of transforms applied on ingestion, enough to invert them.
struct Preprocessing {
  std::vector<std::string> dropped_columns;
  long dropped_rows = 0;
  bool standardized = false;
  std::vector<double> centers;  // per retained column
  std::vector<double> scales;   // per retained column
};

struct DataSet {
  int dim = 0;
  std::vector<double> points;  // n x dim, row-major
  std::vector<std::string> column_names;
  Preprocessing preprocessing;

  long size() const { return dim == 0 ? 0 : long(points.size()) / dim; }

  std::span<const double> point(long i) const {
    return {points.data() + std::size_t(i) * dim, std::size_t(dim)};
  }
};

inline std::vector<double> data_mean(const DataSet& d) {
  if (d.size() == 0) throw data_error("empty dataset");
  std::vector<double> mean(d.dim, 0.0);
  for (long i = 0; i < d.size(); ++i)
    for (int j = 0; j < d.dim; ++j) mean[j] += d.points[std::size_t(i) * d.dim + j];
  for (auto& v : mean) v /= double(d.size());
  return mean;
}

// Total variance: mean squared distance of points to the data mean
// (biased, divide-by-n), summed over coordinates.
inline double total_variance(const DataSet& d) {
  auto mean = data_mean(d);
  KahanSum acc;
  for (long i = 0; i < d.size(); ++i) {
    double s = 0.0;
    for (int j = 0; j < d.dim; ++j) s += sq(d.points[std::size_t(i) * d.dim + j] - mean[j]);
    acc.add(s);
  }
  return acc.value() / double(d.size());
}

// Diameter surrogate used for tolerance scaling: the bounding-box
// diagonal. O(n m) and within sqrt(m) of the exact diameter.
inline double bounding_box_diameter(const DataSet& d) {
  if (d.size() == 0) throw data_error("empty dataset");
  std::vector<double> lo(d.dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d.dim, -std::numeric_limits<double>::infinity());
  for (long i = 0; i < d.size(); ++i)
    for (int j = 0; j < d.dim; ++j) {
      double v = d.points[std::size_t(i) * d.dim + j];
      lo[j] = std::min(lo[j], v);
      hi[j] = std::max(hi[j], v);
    }
  double s = 0.0;
  for (int j = 0; j < d.dim; ++j) s += sq(hi[j] - lo[j]);
  return std::sqrt(s);
}

}  // namespace epg
