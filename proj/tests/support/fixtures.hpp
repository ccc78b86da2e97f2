// fixtures.hpp — shared test graphs, datasets, and small utilities.
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "epg/dataset.hpp"
#include "epg/generators.hpp"
#include "epg/graph.hpp"

namespace fixtures {

// Path of n nodes, spaced along given direction from the origin.
inline epg::ElasticGraph path_graph(int n, double lambda = 1.0, double mu = 1.0,
                                    double dx = 1.0, double dy = 0.0) {
  epg::ElasticGraph g;
  g.dim = 2;
  for (int i = 0; i < n; ++i) g.add_node(std::vector<double>{i * dx, i * dy});
  for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1, lambda});
  return epg::derive_primitive_stars(g, mu);
}

// k-star: center at the origin, leaves on the unit circle.
inline epg::ElasticGraph star_graph(int k, double lambda = 1.0, double mu = 1.0) {
  epg::ElasticGraph g;
  g.dim = 2;
  g.add_node(std::vector<double>{0.0, 0.0});
  for (int i = 0; i < k; ++i) {
    const double a = 2.0 * 3.14159265358979323846 * i / k;
    g.add_node(std::vector<double>{std::cos(a), std::sin(a)});
    g.edges.push_back({0, i + 1, lambda});
  }
  return epg::derive_primitive_stars(g, mu);
}

inline epg::DataSet make_dataset(std::vector<double> pts, int dim) {
  epg::DataSet d;
  d.dim = dim;
  d.points = std::move(pts);
  for (int c = 0; c < dim; ++c) d.column_names.push_back("col" + std::to_string(c));
  return d;
}

// Seeded cloud for randomized checks.
inline epg::DataSet random_cloud(epg::SplitMix64& rng, long n, int dim, double span = 2.0) {
  std::vector<double> pts;
  pts.reserve(std::size_t(n) * dim);
  for (long i = 0; i < n * dim; ++i) pts.push_back((rng.uniform() - 0.5) * span);
  return make_dataset(std::move(pts), dim);
}

inline std::filesystem::path fresh_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("epg_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// Minimal XML well-formedness check: tag balance, quoted attributes, one
// root element. Enough to catch broken SVG emission.
inline bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  int roots = 0;
  while (i < text.size()) {
    if (text[i] != '<') {
      if (text[i] == '>') return false;
      ++i;
      continue;
    }
    std::size_t close = text.find('>', i);
    if (close == std::string::npos) return false;
    std::string tag = text.substr(i + 1, close - i - 1);
    // quotes must pair inside the tag
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
    if (tag.starts_with("?") || tag.starts_with("!--")) {
      i = close + 1;
      continue;
    }
    if (tag.starts_with("/")) {
      std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      if (stack.empty()) ++roots;
    } else if (tag.ends_with("/")) {
      if (stack.empty()) return false;  // self-closing root not expected here
    } else {
      std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
      stack.push_back(name);
    }
    i = close + 1;
  }
  return stack.empty() && roots == 1;
}

}  // namespace fixtures
