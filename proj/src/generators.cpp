#include "genus/generators.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <cmath>
#include <numbers>
#include <string>

#include "genus/error.hpp"

namespace genus {

namespace {

struct GridDarts {
  std::vector<Edge> edges;
  std::vector<std::vector<Dart>> rotation;
};

// Grid with nodes (i, j) -> i*k + j, rows growing southwards. Right edges
// run west to east, down edges north to south. Rotation order is
// east, north, west, south.
GridDarts grid(int k, bool wrap) {
  GridDarts g;
  const int n = k * k;
  auto id = [k](int i, int j) { return i * k + j; };
  std::vector<int> right(n, -1), down(n, -1);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (wrap || j + 1 < k) {
        right[id(i, j)] = static_cast<int>(g.edges.size());
        g.edges.push_back({id(i, j), id(i, (j + 1) % k)});
      }
      if (wrap || i + 1 < k) {
        down[id(i, j)] = static_cast<int>(g.edges.size());
        g.edges.push_back({id(i, j), id((i + 1) % k, j)});
      }
    }
  }
  g.rotation.resize(n);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      auto& rot = g.rotation[id(i, j)];
      if (right[id(i, j)] >= 0) rot.push_back(tail_dart(right[id(i, j)]));
      if (wrap || i > 0) rot.push_back(head_dart(down[id((i + k - 1) % k, j)]));
      if (wrap || j > 0) rot.push_back(head_dart(right[id(i, (j + k - 1) % k)]));
      if (down[id(i, j)] >= 0) rot.push_back(tail_dart(down[id(i, j)]));
    }
  }
  return g;
}

// Rotation of a straight-line planar drawing: darts sorted by angle.
std::vector<std::vector<Dart>> rotation_from_drawing(const std::vector<std::pair<double, double>>& at,
                                                     const std::vector<Edge>& edges) {
  std::vector<std::vector<std::pair<double, Dart>>> by_angle(at.size());
  for (EdgeId e = 0; e < static_cast<EdgeId>(edges.size()); ++e) {
    const auto [t, h] = edges[e];
    by_angle[t].push_back({std::atan2(at[h].second - at[t].second, at[h].first - at[t].first), tail_dart(e)});
    by_angle[h].push_back({std::atan2(at[t].second - at[h].second, at[t].first - at[h].first), head_dart(e)});
  }
  std::vector<std::vector<Dart>> rotation(at.size());
  for (std::size_t v = 0; v < at.size(); ++v) {
    std::sort(by_angle[v].begin(), by_angle[v].end());
    for (const auto& entry : by_angle[v]) rotation[v].push_back(entry.second);
  }
  return rotation;
}

int parse_int(std::string_view text, std::string_view spec) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::UnsupportedParams, "bad integer '" + std::string(text) + "' in '" + std::string(spec) + "'");
  }
  return value;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::UnsupportedParams, what);
}

}  // namespace

CombinatorialMap planar_grid(int k) {
  require(k >= 2, "planar_grid needs k >= 2");
  auto g = grid(k, false);
  return CombinatorialMap::build(k * k, std::move(g.edges), std::move(g.rotation));
}

CombinatorialMap torus_grid(int k) {
  require(k >= 1, "torus_grid needs k >= 1");
  auto g = grid(k, true);
  return CombinatorialMap::build(k * k, std::move(g.edges), std::move(g.rotation));
}

CombinatorialMap canonical_polygon(int g) {
  require(g >= 1, "canonical_polygon needs g >= 1");
  std::vector<Edge> edges(2 * g, Edge{0, 0});
  std::vector<std::vector<Dart>> rotation(1);
  for (int i = 0; i < g; ++i) {
    const EdgeId a = 2 * i;
    const EdgeId b = 2 * i + 1;
    rotation[0].insert(rotation[0].end(), {tail_dart(a), tail_dart(b), head_dart(a), head_dart(b)});
  }
  return CombinatorialMap::build(1, std::move(edges), std::move(rotation));
}

CombinatorialMap sphere_cycle(int k) {
  require(k >= 1, "cycle needs k >= 1");
  std::vector<Edge> edges;
  for (int i = 0; i < k; ++i) edges.push_back({i, (i + 1) % k});
  if (k == 1) return CombinatorialMap::build(1, std::move(edges), {{tail_dart(0), head_dart(0)}});
  if (k == 2) {
    return CombinatorialMap::build(2, std::move(edges), {{tail_dart(0), head_dart(1)}, {head_dart(0), tail_dart(1)}});
  }
  std::vector<std::pair<double, double>> at;
  for (int i = 0; i < k; ++i) {
    const double angle = 2 * std::numbers::pi * i / k;
    at.push_back({std::cos(angle), std::sin(angle)});
  }
  auto rotation = rotation_from_drawing(at, edges);
  return CombinatorialMap::build(k, std::move(edges), std::move(rotation));
}

CombinatorialMap single_edge() { return CombinatorialMap::build(2, {{0, 1}}, {{tail_dart(0)}, {head_dart(0)}}); }

CombinatorialMap tetrahedron() {
  std::vector<std::pair<double, double>> at{{0.0, 0.0}};
  for (int i = 0; i < 3; ++i) {
    const double angle = std::numbers::pi / 2 + 2 * std::numbers::pi * i / 3;
    at.push_back({std::cos(angle), std::sin(angle)});
  }
  std::vector<Edge> edges{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}, {3, 1}};
  auto rotation = rotation_from_drawing(at, edges);
  return CombinatorialMap::build(4, std::move(edges), std::move(rotation));
}

bool is_simple(const CombinatorialMap& map) {
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& [t, h] : map.edges()) {
    if (t == h || !seen.insert({std::min(t, h), std::max(t, h)}).second) return false;
  }
  return true;
}

CombinatorialMap barycentric_subdivision(const CombinatorialMap& map) {
  const int n = map.node_count();
  const int m = map.edge_count();
  const int f = map.face_count();
  require(m > 0, "cannot subdivide a map without edges");
  auto mid = [n](EdgeId e) { return n + e; };
  auto center = [n, m](FaceId face) { return n + m + face; };
  // New edge ids: half(d) = d, side(d) = 2m + d, corner(d) = 4m + d.
  auto half = [](Dart d) { return d; };
  auto side = [m](Dart d) { return 2 * m + d; };
  auto corner = [m](Dart d) { return 4 * m + d; };

  std::vector<Edge> edges(6 * m);
  for (Dart d = 0; d < 2 * m; ++d) {
    edges[half(d)] = {map.dart_node(d), mid(dart_edge(d))};
    edges[side(d)] = {mid(dart_edge(d)), center(map.dart_face(d))};
    // Corner between d and next_ccw(d) lies in the face on the right of the
    // dart arriving along d's edge.
    edges[corner(d)] = {map.dart_node(d), center(map.dart_face(opposite(d)))};
  }

  std::vector<std::vector<Dart>> rotation(n + m + f);
  for (NodeId v = 0; v < n; ++v) {
    for (Dart d : map.rotation()[v]) {
      rotation[v].push_back(tail_dart(half(d)));
      rotation[v].push_back(tail_dart(corner(d)));
    }
  }
  for (EdgeId e = 0; e < m; ++e) {
    auto& rot = rotation[mid(e)];
    rot = {head_dart(half(tail_dart(e))), tail_dart(side(tail_dart(e))), head_dart(half(head_dart(e))),
           tail_dart(side(head_dart(e)))};
  }
  for (FaceId face = 0; face < f; ++face) {
    std::vector<Dart> clockwise;
    for (Dart x : map.faces()[face]) {
      clockwise.push_back(head_dart(side(x)));
      clockwise.push_back(head_dart(corner(opposite(x))));
    }
    rotation[center(face)].assign(clockwise.rbegin(), clockwise.rend());
  }
  return CombinatorialMap::build(n + m + f, std::move(edges), std::move(rotation));
}

CombinatorialMap attach_planar_grid(const CombinatorialMap& host, NodeId w, int k) {
  require(k >= 2, "attached grid needs k >= 2");
  require(w >= 0 && w < host.node_count(), "attachment node does not exist");
  const int hn = host.node_count();
  const int hm = host.edge_count();
  auto blob = grid(k, false);

  auto node_of = [&](int b) { return b == 0 ? w : hn + b - 1; };
  std::vector<Edge> edges = host.edges();
  for (const auto& [t, h] : blob.edges) edges.push_back({node_of(t), node_of(h)});
  auto shift = [hm](Dart d) { return d + 2 * hm; };

  std::vector<std::vector<Dart>> rotation = host.rotation();
  rotation.resize(hn + k * k - 1);
  for (int b = 1; b < k * k; ++b) {
    for (Dart d : blob.rotation[b]) rotation[node_of(b)].push_back(shift(d));
  }
  // Blob corner (0,0) has darts [east, south]; its outer corner runs from
  // east to south, so the block is inserted starting at south.
  const auto& corner_rot = blob.rotation[0];
  std::vector<Dart> block{shift(corner_rot[1]), shift(corner_rot[0])};
  auto& rot_w = rotation[w];
  rot_w.insert(rot_w.empty() ? rot_w.end() : rot_w.begin() + 1, block.begin(), block.end());
  return CombinatorialMap::build(hn + k * k - 1, std::move(edges), std::move(rotation));
}

CombinatorialMap generate(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  auto need_rest = [&] {
    require(!rest.empty(), "generator '" + std::string(kind) + "' needs a parameter");
    return rest;
  };
  auto int_arg = [&] { return parse_int(need_rest(), spec); };

  if (kind == "planar_grid") return planar_grid(int_arg());
  if (kind == "torus_grid") return torus_grid(int_arg());
  if (kind == "canonical_polygon") return canonical_polygon(int_arg());
  if (kind == "cycle") return sphere_cycle(int_arg());
  if (kind == "edge") return single_edge();
  if (kind == "tetrahedron" || kind == "k4") return tetrahedron();
  if (kind == "subdivided") {
    CombinatorialMap once = barycentric_subdivision(generate(need_rest()));
    return is_simple(once) ? once : barycentric_subdivision(once);
  }
  if (kind == "blob") {
    need_rest();
    const auto next = rest.find(':');
    require(next != std::string_view::npos, "blob spec is blob:K:<host spec>");
    return attach_planar_grid(generate(rest.substr(next + 1)), 0, parse_int(rest.substr(0, next), spec));
  }
  throw Error(ErrorKind::UnsupportedParams, "unknown generator '" + std::string(kind) + "'");
}

std::vector<std::pair<std::string, CombinatorialMap>> standard_corpus() {
  static const char* specs[] = {
      "planar_grid:2",         "planar_grid:3",         "planar_grid:4",           "torus_grid:2",
      "torus_grid:3",          "torus_grid:4",          "canonical_polygon:1",     "canonical_polygon:2",
      "canonical_polygon:3",   "subdivided:tetrahedron", "subdivided:canonical_polygon:1",
      "subdivided:canonical_polygon:2", "subdivided:canonical_polygon:3", "subdivided:torus_grid:2",
  };
  std::vector<std::pair<std::string, CombinatorialMap>> corpus;
  for (const char* s : specs) corpus.emplace_back(s, generate(s));
  return corpus;
}

std::vector<std::pair<std::string, CombinatorialMap>> separation_corpus() {
  std::vector<std::pair<std::string, CombinatorialMap>> corpus;
  for (auto& [name, map] : standard_corpus()) {
    if (map.genus() == 1 || map.genus() == 2) corpus.emplace_back(name, std::move(map));
  }
  for (const char* s : {"blob:3:torus_grid:3", "blob:2:torus_grid:4", "blob:3:canonical_polygon:2"}) {
    corpus.emplace_back(s, generate(s));
  }
  return corpus;
}

}  // namespace genus
