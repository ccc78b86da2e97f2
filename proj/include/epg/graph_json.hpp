// graph_json.hpp — the graph JSON document read and written by the CLI.
//
// Schema: { "dimension": m, "nodes": [[coords]], "edges": [[i, j, lambda]],
//           "stars": [{"center": i, "leaves": [..], "mu": x}],
//           "primitive": bool }
#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "epg/graph.hpp"

namespace epg {

inline nlohmann::json graph_to_json(const ElasticGraph& g) {
  nlohmann::json j;
  j["dimension"] = g.dim;
  j["primitive"] = g.primitive;
  j["nodes"] = nlohmann::json::array();
  for (int i = 0; i < g.node_count(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : g.node(i)) row.push_back(v);
    j["nodes"].push_back(std::move(row));
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges) j["edges"].push_back({e.a, e.b, e.lambda});
  j["stars"] = nlohmann::json::array();
  for (const auto& s : g.stars) {
    nlohmann::json star;
    star["center"] = s.center;
    star["leaves"] = s.leaves;
    star["mu"] = s.mu;
    j["stars"].push_back(std::move(star));
  }
  return j;
}

inline ElasticGraph graph_from_json(const nlohmann::json& j) {
  ElasticGraph g;
  try {
    g.dim = j.at("dimension").get<int>();
    g.primitive = j.value("primitive", false);
    for (const auto& row : j.at("nodes")) {
      if (int(row.size()) != g.dim) throw data_error("node row width differs from dimension");
      for (const auto& v : row) g.coords.push_back(v.get<double>());
    }
    for (const auto& e : j.at("edges")) {
      if (e.size() != 3) throw data_error("edge entries are [i, j, lambda]");
      g.edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    if (j.contains("stars"))
      for (const auto& s : j.at("stars")) {
        Star star;
        star.center = s.at("center").get<int>();
        star.leaves = s.at("leaves").get<std::vector<int>>();
        star.mu = s.at("mu").get<double>();
        g.stars.push_back(std::move(star));
      }
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("malformed graph JSON: ") + e.what());
  }
  validate(g);
  return g;
}

inline void save_graph(const ElasticGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path);
  out << graph_to_json(g).dump(2) << '\n';
}

inline ElasticGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("malformed graph JSON in ") + path + ": " + e.what());
  }
  return graph_from_json(j);
}

}  // namespace epg
