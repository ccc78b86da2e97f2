// uci.hpp — cached retrieval of the UCI benchmark datasets.
//
// Files are downloaded once into <cache_dir>/<name>/<original filename>
// with an FNV-1a-64 checksum sidecar; a warm cache is never re-fetched.
// Downloads land in a temporary file and are renamed into place, so
// concurrent fetches cannot interleave partial content.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "epg/csv.hpp"
#include <unistd.h>

namespace epg {

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string to_hex(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct UciDataset {
  std::string name;
  std::string host;
  std::string remote_path;
  std::string filename;
  CsvOptions csv;
  std::uint64_t pinned_checksum = 0;  // 0 = not pinned (canonical bytes unknown)
};

// Column handling per dataset: class/categorical columns are dropped
// (species, wine class, abalone sex, forestfires month/day); fully
// non-numeric columns drop automatically during CSV ingestion.
inline UciDataset uci_dataset_info(const std::string& name) {
  UciDataset d;
  d.name = name;
  d.host = "archive.ics.uci.edu";
  if (name == "iris") {
    d.remote_path = "/ml/machine-learning-databases/iris/iris.data";
    d.filename = "iris.data";
    d.csv.has_header = false;
    d.csv.column_names = {"sepal_length", "sepal_width", "petal_length", "petal_width", "species"};
    d.pinned_checksum = 0x1930d26c9e4cf551ull;
  } else if (name == "wine") {
    d.remote_path = "/ml/machine-learning-databases/wine/wine.data";
    d.filename = "wine.data";
    d.csv.has_header = false;
    d.csv.column_names = {"class",          "alcohol",    "malic_acid",
                          "ash",            "alcalinity", "magnesium",
                          "total_phenols",  "flavanoids", "nonflavanoid_phenols",
                          "proanthocyanins", "color_intensity", "hue",
                          "od280_od315",    "proline"};
    d.csv.drop_columns = {"class"};
  } else if (name == "abalone") {
    d.remote_path = "/ml/machine-learning-databases/abalone/abalone.data";
    d.filename = "abalone.data";
    d.csv.has_header = false;
    d.csv.column_names = {"sex",          "length",         "diameter",
                          "height",       "whole_weight",   "shucked_weight",
                          "viscera_weight", "shell_weight", "rings"};
  } else if (name == "forestfires") {
    d.remote_path = "/ml/machine-learning-databases/forest-fires/forestfires.csv";
    d.filename = "forestfires.csv";
    d.csv.has_header = true;
  } else {
    throw data_error("unknown UCI dataset: " + name +
                     " (expected iris, wine, forestfires, or abalone)");
  }
  return d;
}

inline std::string default_uci_cache_dir() {
  if (const char* env = std::getenv("EPG_UCI_CACHE")) return env;
  return "uci_cache";
}

namespace detail {
inline std::string read_file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw data_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string download_uci_file(const UciDataset& d) {
  httplib::SSLClient client(d.host);
  client.set_follow_location(true);
  client.set_connection_timeout(20, 0);
  client.set_read_timeout(60, 0);
  auto res = client.Get(d.remote_path);
  if (!res)
    throw data_error("network failure fetching " + d.name + " from https://" + d.host +
                     d.remote_path + " (" + httplib::to_string(res.error()) + ")");
  if (res->status != 200)
    throw data_error("HTTP " + std::to_string(res->status) + " fetching " + d.name);
  if (res->body.empty()) throw data_error("empty response fetching " + d.name);
  return res->body;
}
}  // namespace detail

inline void verify_checksum(const UciDataset& d, const std::filesystem::path& file,
                            const std::string& bytes) {
  const std::uint64_t actual = fnv1a64(bytes);
  if (d.pinned_checksum != 0 && actual != d.pinned_checksum)
    throw data_error("checksum mismatch for " + file.string() + ": got " + to_hex(actual) +
                     ", expected " + to_hex(d.pinned_checksum));
  const auto sidecar = file.string() + ".fnv1a64";
  if (std::filesystem::exists(sidecar)) {
    std::ifstream side(sidecar);
    std::string recorded;
    side >> recorded;
    if (recorded != to_hex(actual))
      throw data_error("checksum mismatch for " + file.string() + ": got " + to_hex(actual) +
                       ", sidecar says " + recorded);
  } else {
    std::ofstream side(sidecar);
    side << to_hex(actual) << '\n';
  }
}

// Fetches (or reuses) the named dataset. allow_network=false restricts to
// the cache and fails with a data_error when cold.
inline DataSet fetch_uci(const std::string& name, const std::string& cache_dir,
                         bool allow_network = true) {
  const UciDataset d = uci_dataset_info(name);
  const std::filesystem::path dir = std::filesystem::path(cache_dir) / d.name;
  const std::filesystem::path file = dir / d.filename;

  if (!std::filesystem::exists(file)) {
    if (!allow_network)
      throw data_error("dataset " + name + " is not cached at " + file.string() +
                       " and network access is disabled");
    std::filesystem::create_directories(dir);
    std::string bytes = detail::download_uci_file(d);
    const std::uint64_t actual = fnv1a64(bytes);
    if (d.pinned_checksum != 0 && actual != d.pinned_checksum)
      throw data_error("downloaded " + name + " has checksum " + to_hex(actual) +
                       ", expected " + to_hex(d.pinned_checksum));
    // Atomic publish: write then rename, so concurrent fetchers see either
    // nothing or the whole file.
    const auto tmp = file.string() + ".tmp" + std::to_string(std::uint64_t(::getpid()));
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw data_error("cannot write " + tmp);
      out << bytes;
    }
    std::filesystem::rename(tmp, file);
    std::ofstream side(file.string() + ".fnv1a64");
    side << to_hex(actual) << '\n';
  }

  const std::string bytes = detail::read_file_bytes(file);
  verify_checksum(d, file, bytes);
  std::istringstream in(bytes);
  return parse_csv(in, d.csv);
}

}  // namespace epg
