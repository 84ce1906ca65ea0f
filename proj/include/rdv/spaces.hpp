#pragma once

// Space files and generators for classical finite metric spaces.
//
// Space file (JSON, UTF-8):
//   {
//     "name": "T2",
//     "points": ["a", "b"],
//     "kernel": [[0, 1], [1, 0]],
//     "is_metric": true,                     // optional, default true
//     "subsets": {"H": [0], "L": [0, 1]}     // optional, default all points
//   }
// With is_metric true the metric axioms are enforced at load.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rdv/core.hpp"

namespace rdv {

inline constexpr std::size_t kDefaultPointCap = 4096;

/// Point-count cap for generated spaces; RDV_CAP overrides the default.
inline std::size_t default_point_cap() {
  if (const char* env = std::getenv("RDV_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultPointCap;
}

struct LoadedSpace {
  KernelSpace space;
  SubsetPair subsets;
};

namespace detail {

inline std::vector<std::size_t> parse_indices(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::SchemaError, std::string(what) + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) {
      throw Error(ErrorCode::SchemaError, std::string(what) + " entries must be nonnegative integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

}  // namespace detail

inline LoadedSpace load_space_json(const nlohmann::json& doc) {
  using nlohmann::json;
  if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "space document must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "name" && key != "points" && key != "kernel" && key != "is_metric" &&
        key != "subsets") {
      throw Error(ErrorCode::SchemaError, "unknown field '" + key + "'");
    }
  }
  for (const char* key : {"name", "points", "kernel"}) {
    if (!doc.contains(key)) throw Error(ErrorCode::SchemaError, std::string("missing field '") + key + "'");
  }
  if (!doc["name"].is_string()) throw Error(ErrorCode::SchemaError, "name must be a string");
  if (!doc["points"].is_array()) throw Error(ErrorCode::SchemaError, "points must be an array");
  std::vector<std::string> points;
  for (const auto& p : doc["points"]) {
    if (!p.is_string()) throw Error(ErrorCode::SchemaError, "point labels must be strings");
    points.push_back(p.get<std::string>());
  }
  const auto& kj = doc["kernel"];
  if (!kj.is_array()) throw Error(ErrorCode::SchemaError, "kernel must be an array of rows");
  const std::size_t m = points.size();
  if (m == 0) throw Error(ErrorCode::SchemaError, "space has no points");
  if (kj.size() != m) {
    throw Error(ErrorCode::SchemaError, "kernel has " + std::to_string(kj.size()) + " rows for " +
                                            std::to_string(m) + " points");
  }
  Matrix kernel(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = kj[i];
    if (!row.is_array() || row.size() != m) {
      throw Error(ErrorCode::SchemaError, "kernel row " + std::to_string(i) + " must have " +
                                              std::to_string(m) + " entries");
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (!row[j].is_number()) throw Error(ErrorCode::SchemaError, "kernel entries must be numbers");
      kernel(i, j) = row[j].get<double>();
    }
  }
  bool require_metric = true;
  if (doc.contains("is_metric")) {
    if (!doc["is_metric"].is_boolean()) throw Error(ErrorCode::SchemaError, "is_metric must be boolean");
    require_metric = doc["is_metric"].get<bool>();
  }
  SubsetPair subsets = SubsetPair::full(m);
  if (doc.contains("subsets")) {
    const auto& s = doc["subsets"];
    if (!s.is_object()) throw Error(ErrorCode::SchemaError, "subsets must be an object");
    for (const auto& [key, _] : s.items()) {
      if (key != "H" && key != "L") throw Error(ErrorCode::SchemaError, "unknown subset '" + key + "'");
    }
    auto h = s.contains("H") ? detail::parse_indices(s["H"], "H") : all_indices(m);
    auto l = s.contains("L") ? detail::parse_indices(s["L"], "L") : all_indices(m);
    subsets = SubsetPair::make(std::move(h), std::move(l), m);
  }
  auto space = KernelSpace::make(doc["name"].get<std::string>(), std::move(points),
                                 std::move(kernel), require_metric);
  return {std::move(space), std::move(subsets)};
}

inline LoadedSpace load_space(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return load_space_json(doc);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

inline LoadedSpace load_space_file(const std::string& path) { return load_space(read_text_file(path)); }

inline nlohmann::json space_to_json(const KernelSpace& k,
                                    const std::optional<SubsetPair>& subsets = std::nullopt) {
  nlohmann::json doc;
  doc["name"] = k.name();
  doc["points"] = k.points();
  doc["kernel"] = k.kernel().to_rows();
  doc["is_metric"] = k.is_metric();
  if (subsets) doc["subsets"] = {{"H", subsets->H}, {"L", subsets->L}};
  return doc;
}

inline std::string space_to_string(const KernelSpace& k,
                                   const std::optional<SubsetPair>& subsets = std::nullopt) {
  return space_to_json(k, subsets).dump(2) + "\n";
}

enum class SpaceKind { interval_grid, circle, hypercube, random_graph, file };
enum class CircleMetric { chord, arc };

struct SpaceDescriptor {
  SpaceKind kind = SpaceKind::interval_grid;
  std::size_t m = 2;
  CircleMetric circle_metric = CircleMetric::chord;
  double radius = 1.0;
  std::size_t dim = 1;
  double edge_prob = 0.5;
  std::uint64_t seed = 0;
  std::string path;  // kind == file

  static SpaceDescriptor interval_grid(std::size_t m) {
    SpaceDescriptor d;
    d.kind = SpaceKind::interval_grid;
    d.m = m;
    return d;
  }
  static SpaceDescriptor circle(std::size_t m, CircleMetric metric, double radius = 1.0) {
    SpaceDescriptor d;
    d.kind = SpaceKind::circle;
    d.m = m;
    d.circle_metric = metric;
    d.radius = radius;
    return d;
  }
  static SpaceDescriptor hypercube(std::size_t dim) {
    SpaceDescriptor d;
    d.kind = SpaceKind::hypercube;
    d.dim = dim;
    return d;
  }
  static SpaceDescriptor random_graph(std::size_t m, double edge_prob, std::uint64_t seed) {
    SpaceDescriptor d;
    d.kind = SpaceKind::random_graph;
    d.m = m;
    d.edge_prob = edge_prob;
    d.seed = seed;
    return d;
  }
};

namespace detail {

inline std::string format_double(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

// Uniform [0, 1) from the top 53 bits; mt19937_64 output is fixed by the
// standard, so draws are identical across platforms.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool connected(const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<char> seen(adj.size(), 0);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    const auto v = q.front();
    q.pop();
    for (auto w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        q.push(w);
      }
    }
  }
  return count == adj.size();
}

inline constexpr std::size_t kConnectRetries = 1000;

}  // namespace detail

inline KernelSpace generate(const SpaceDescriptor& d, std::size_t cap = default_point_cap()) {
  switch (d.kind) {
    case SpaceKind::file: return load_space_file(d.path).space;
    case SpaceKind::hypercube: {
      if (d.dim == 0) throw Error(ErrorCode::InvalidArgument, "hypercube dimension must be positive");
      if (d.dim >= 63 || (std::size_t{1} << d.dim) > cap) {
        throw Error(ErrorCode::TooLarge, "hypercube of dimension " + std::to_string(d.dim) +
                                             " exceeds the point cap " + std::to_string(cap));
      }
      const std::size_t m = std::size_t{1} << d.dim;
      Matrix k(m, m);
      std::vector<std::string> labels(m);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          k(i, j) = static_cast<double>(__builtin_popcountll(static_cast<unsigned long long>(i ^ j)));
        }
        for (std::size_t b = d.dim; b-- > 0;) labels[i].push_back((i >> b) & 1U ? '1' : '0');
      }
      return KernelSpace::make("hypercube(" + std::to_string(d.dim) + ")", std::move(labels),
                               std::move(k), true);
    }
    default: break;
  }

  if (d.m == 0) throw Error(ErrorCode::InvalidArgument, "point count must be positive");
  if (d.m > cap) {
    throw Error(ErrorCode::TooLarge, std::to_string(d.m) + " points exceed the cap " +
                                         std::to_string(cap));
  }
  const std::size_t m = d.m;
  Matrix k(m, m);

  switch (d.kind) {
    case SpaceKind::interval_grid: {
      if (m < 2) throw Error(ErrorCode::InvalidArgument, "interval_grid needs at least 2 points");
      const double denom = static_cast<double>(m - 1);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t diff = i > j ? i - j : j - i;
          k(i, j) = static_cast<double>(diff) / denom;
        }
      }
      return KernelSpace::make("interval_grid(" + std::to_string(m) + ")", default_labels(m),
                               std::move(k), true);
    }
    case SpaceKind::circle: {
      if (!(d.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t diff = i > j ? i - j : j - i;
          const std::size_t steps = std::min(diff, m - diff);
          const double angle = 2.0 * std::numbers::pi * static_cast<double>(steps) / static_cast<double>(m);
          k(i, j) = d.circle_metric == CircleMetric::chord ? 2.0 * d.radius * std::sin(0.5 * angle)
                                                           : d.radius * angle;
        }
      }
      const std::string metric = d.circle_metric == CircleMetric::chord ? "chord" : "arc";
      return KernelSpace::make("circle(" + std::to_string(m) + "," + metric + "," +
                                   detail::format_double(d.radius) + ")",
                               default_labels(m), std::move(k), true);
    }
    case SpaceKind::random_graph: {
      if (!(d.edge_prob > 0.0 && d.edge_prob <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "edge probability must lie in (0, 1]");
      }
      std::mt19937_64 rng(d.seed);
      for (std::size_t attempt = 0; attempt < detail::kConnectRetries; ++attempt) {
        std::vector<std::vector<std::size_t>> adj(m);
        Matrix dist(m, m, kInfinity);
        for (std::size_t i = 0; i < m; ++i) dist(i, i) = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = i + 1; j < m; ++j) {
            const bool edge = detail::unit_uniform(rng) < d.edge_prob;
            const double weight = 1.0 - 0.9 * detail::unit_uniform(rng);
            if (!edge) continue;
            adj[i].push_back(j);
            adj[j].push_back(i);
            dist(i, j) = weight;
            dist(j, i) = weight;
          }
        }
        if (!detail::connected(adj)) continue;
        for (std::size_t l = 0; l < m; ++l) {
          for (std::size_t i = 0; i < m; ++i) {
            const double dil = dist(i, l);
            for (std::size_t j = 0; j < m; ++j) {
              const double via = dil + dist(l, j);
              if (via < dist(i, j)) dist(i, j) = via;
            }
          }
        }
        return KernelSpace::make("random_graph(" + std::to_string(m) + "," +
                                     detail::format_double(d.edge_prob) + "," +
                                     std::to_string(d.seed) + ")",
                                 default_labels(m), std::move(dist), true);
      }
      throw Error(ErrorCode::DisconnectedAfterRetries,
                  "no connected graph after " + std::to_string(detail::kConnectRetries) + " draws");
    }
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown space kind");
}

}  // namespace rdv
