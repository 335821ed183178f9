#include "genus/map_io.hpp"

#include <fstream>

#include "genus/error.hpp"

namespace genus {

using nlohmann::json;

json stats_to_json(const MapStats& stats) {
  return json{{"n", stats.n},
              {"m", stats.m},
              {"f", stats.f},
              {"g", stats.g},
              {"node_degrees", stats.node_degrees},
              {"face_lengths", stats.face_lengths}};
}

json map_to_json(const CombinatorialMap& map) {
  json edges = json::array();
  for (const auto& [t, h] : map.edges()) edges.push_back({t, h});
  json rotation = json::array();
  for (const auto& rot : map.rotation()) {
    json ids = json::array();
    for (Dart d : rot) ids.push_back(dart_sign(d) * (dart_edge(d) + 1));
    rotation.push_back(std::move(ids));
  }
  const auto s = map.stats();
  return json{{"nodes", map.node_count()},
              {"edges", std::move(edges)},
              {"rotation", std::move(rotation)},
              {"stats", {{"n", s.n}, {"m", s.m}, {"f", s.f}, {"g", s.g}}}};
}

CombinatorialMap map_from_json(const json& doc) {
  try {
    const int n = doc.at("nodes").get<int>();
    std::vector<Edge> edges;
    for (const auto& pair : doc.at("edges")) {
      if (!pair.is_array() || pair.size() != 2) throw Error(ErrorKind::MalformedInput, "edge entries must be [tail, head]");
      edges.push_back({pair[0].get<int>(), pair[1].get<int>()});
    }
    const int m = static_cast<int>(edges.size());
    std::vector<std::vector<Dart>> rotation;
    for (const auto& ids : doc.at("rotation")) {
      std::vector<Dart> rot;
      for (const auto& id : ids) {
        const int s = id.get<int>();
        if (s == 0 || std::abs(s) > m) {
          throw Error(ErrorKind::MalformedRotation, "edge-end id " + std::to_string(s) + " out of range");
        }
        rot.push_back(s > 0 ? tail_dart(s - 1) : head_dart(-s - 1));
      }
      rotation.push_back(std::move(rot));
    }
    return CombinatorialMap::build(n, std::move(edges), std::move(rotation));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("map JSON: ") + e.what());
  }
}

CombinatorialMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MalformedInput, "cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedInput, path.string() + ": " + e.what());
  }
  return map_from_json(doc);
}

void save_map(const CombinatorialMap& map, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::MalformedInput, "cannot write " + path.string());
  out << map_to_json(map).dump(2) << '\n';
}

}  // namespace genus
