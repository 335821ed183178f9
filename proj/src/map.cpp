#include "genus/map.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <string>

#include "genus/error.hpp"

namespace genus {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::MalformedRotation: return "MalformedRotation";
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::UnsupportedParams: return "UnsupportedParams";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NotACirculation: return "NotACirculation";
    case ErrorKind::TraceTooShort: return "TraceTooShort";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSeparable: return "NotSeparable";
    case ErrorKind::CheckFailed: return "CheckFailed";
  }
  return "Unknown";
}

namespace {

// Collapses signed contributions per edge, dropping those that cancel.
std::vector<Incidence> net_incidence(const std::vector<Incidence>& raw) {
  std::map<EdgeId, int> acc;
  for (const auto& [e, s] : raw) acc[e] += s;
  std::vector<Incidence> out;
  for (const auto& [e, s] : acc) {
    if (s != 0) out.push_back({e, s});
  }
  return out;
}

}  // namespace

CombinatorialMap CombinatorialMap::build(int node_count, std::vector<Edge> edges,
                                         std::vector<std::vector<Dart>> rotation) {
  if (node_count < 1) throw Error(ErrorKind::MalformedInput, "map needs at least one node");
  if (static_cast<int>(rotation.size()) != node_count) {
    throw Error(ErrorKind::MalformedRotation, "rotation must list every node");
  }
  const int m = static_cast<int>(edges.size());
  for (int e = 0; e < m; ++e) {
    const auto& [t, h] = edges[e];
    if (t < 0 || t >= node_count || h < 0 || h >= node_count) {
      throw Error(ErrorKind::MalformedInput, "edge " + std::to_string(e) + " references a missing node");
    }
  }

  CombinatorialMap map;
  map.edges_ = std::move(edges);
  map.rotation_ = std::move(rotation);

  map.next_ccw_.assign(2 * m, -1);
  std::vector<int> seen(2 * m, 0);
  for (NodeId v = 0; v < node_count; ++v) {
    const auto& rot = map.rotation_[v];
    for (std::size_t i = 0; i < rot.size(); ++i) {
      const Dart d = rot[i];
      if (d < 0 || d >= 2 * m) {
        throw Error(ErrorKind::MalformedRotation, "unknown dart " + std::to_string(d) + " at node " + std::to_string(v));
      }
      if (seen[d]++) {
        throw Error(ErrorKind::MalformedRotation, "dart " + std::to_string(d) + " listed twice");
      }
      if (map.dart_node(d) != v) {
        throw Error(ErrorKind::MalformedRotation,
                    "dart " + std::to_string(d) + " listed at node " + std::to_string(v) + " but belongs to node " +
                        std::to_string(map.dart_node(d)));
      }
      map.next_ccw_[d] = rot[(i + 1) % rot.size()];
    }
  }
  for (Dart d = 0; d < 2 * m; ++d) {
    if (!seen[d]) throw Error(ErrorKind::MalformedRotation, "dart " + std::to_string(d) + " missing from rotation");
  }

  // Connectivity of the underlying graph.
  {
    std::vector<std::vector<NodeId>> adj(node_count);
    for (const auto& [t, h] : map.edges_) {
      adj[t].push_back(h);
      adj[h].push_back(t);
    }
    std::vector<char> reached(node_count, 0);
    std::queue<NodeId> queue;
    queue.push(0);
    reached[0] = 1;
    int count = 1;
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop();
      for (NodeId w : adj[u]) {
        if (!reached[w]) {
          reached[w] = 1;
          ++count;
          queue.push(w);
        }
      }
    }
    if (count != node_count) {
      throw Error(ErrorKind::DisconnectedGraph,
                  std::to_string(node_count - count) + " node(s) unreachable from node 0");
    }
  }

  // Face tracing: every dart is consumed exactly once.
  map.dart_face_.assign(2 * m, -1);
  for (Dart start = 0; start < 2 * m; ++start) {
    if (map.dart_face_[start] >= 0) continue;
    const FaceId face = static_cast<FaceId>(map.faces_.size());
    std::vector<Dart> walk;
    Dart d = start;
    while (map.dart_face_[d] < 0) {
      map.dart_face_[d] = face;
      walk.push_back(d);
      d = map.next_ccw_[opposite(d)];
    }
    map.faces_.push_back(std::move(walk));
  }
  // A lone node with no edges is the sphere with a single face.
  if (m == 0) map.faces_.emplace_back();

  map.node_incidence_.resize(node_count);
  {
    std::vector<std::vector<Incidence>> raw(node_count);
    for (EdgeId e = 0; e < m; ++e) {
      raw[map.edges_[e].head].push_back({e, +1});
      raw[map.edges_[e].tail].push_back({e, -1});
    }
    for (NodeId v = 0; v < node_count; ++v) map.node_incidence_[v] = net_incidence(raw[v]);
  }
  map.face_incidence_.resize(map.faces_.size());
  for (std::size_t f = 0; f < map.faces_.size(); ++f) {
    std::vector<Incidence> raw;
    for (Dart d : map.faces_[f]) raw.push_back({dart_edge(d), dart_sign(d)});
    map.face_incidence_[f] = net_incidence(raw);
  }

  const int euler = node_count - m + static_cast<int>(map.faces_.size());
  // Tracing a valid rotation system always yields 2 - 2g with g >= 0.
  if ((2 - euler) % 2 != 0 || euler > 2) {
    throw Error(ErrorKind::MalformedRotation, "face tracing produced Euler characteristic " + std::to_string(euler));
  }
  map.genus_ = (2 - euler) / 2;
  return map;
}

MapStats CombinatorialMap::stats() const {
  MapStats s;
  s.n = node_count();
  s.m = edge_count();
  s.f = face_count();
  s.g = genus_;
  for (NodeId v = 0; v < s.n; ++v) s.node_degrees.push_back(node_degree(v));
  for (FaceId f = 0; f < s.f; ++f) s.face_lengths.push_back(face_length(f));
  return s;
}

std::vector<std::vector<NodeId>> CombinatorialMap::adjacency() const {
  std::vector<std::vector<NodeId>> adj(node_count());
  for (const auto& [t, h] : edges_) {
    if (t == h) continue;
    adj[t].push_back(h);
    adj[h].push_back(t);
  }
  return adj;
}

int genus(const CombinatorialMap& map) {
  return (2 - map.node_count() + map.edge_count() - map.face_count()) / 2;
}

CombinatorialMap dual(const CombinatorialMap& map) {
  const int m = map.edge_count();
  std::vector<Edge> edges(m);
  for (EdgeId e = 0; e < m; ++e) edges[e] = {map.left_shore(e), map.right_shore(e)};

  // The primal walk around F keeps F on its right, i.e. runs clockwise
  // around F; the dual dart crossing primal dart d sits at F as d^1.
  std::vector<std::vector<Dart>> rotation(map.face_count());
  for (FaceId f = 0; f < map.face_count(); ++f) {
    const auto& walk = map.faces()[f];
    for (auto it = walk.rbegin(); it != walk.rend(); ++it) rotation[f].push_back(opposite(*it));
  }
  return CombinatorialMap::build(map.face_count(), std::move(edges), std::move(rotation));
}

EdgeVector coboundary(const CombinatorialMap& map, NodeId v) {
  EdgeVector x = EdgeVector::Zero(map.edge_count());
  for (const auto& [e, s] : map.node_incidence(v)) x[e] = s;
  return x;
}

EdgeVector boundary(const CombinatorialMap& map, FaceId f) {
  EdgeVector x = EdgeVector::Zero(map.edge_count());
  for (const auto& [e, s] : map.face_incidence(f)) x[e] = s;
  return x;
}

ProbeSet make_probe(const CombinatorialMap& map, std::vector<NodeId> nodes) {
  if (nodes.empty()) throw Error(ErrorKind::MalformedInput, "probe node set is empty");
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  const int n = map.node_count();
  std::vector<char> in_u(n, 0);
  for (NodeId v : nodes) {
    if (v < 0 || v >= n) throw Error(ErrorKind::MalformedInput, "probe node " + std::to_string(v) + " does not exist");
    in_u[v] = 1;
  }

  const auto adj = map.adjacency();
  std::vector<char> reached(n, 0);
  std::queue<NodeId> queue;
  queue.push(nodes.front());
  reached[nodes.front()] = 1;
  std::size_t count = 1;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop();
    for (NodeId w : adj[u]) {
      if (in_u[w] && !reached[w]) {
        reached[w] = 1;
        ++count;
        queue.push(w);
      }
    }
  }
  if (count != nodes.size()) throw Error(ErrorKind::MalformedInput, "probe nodes do not induce a connected subgraph");

  ProbeSet probe;
  probe.nodes = std::move(nodes);
  for (EdgeId e = 0; e < map.edge_count(); ++e) {
    if (in_u[map.tail(e)] || in_u[map.head(e)]) probe.edges.push_back(e);
  }
  return probe;
}

ProbeSet neighbourhood_probe(const CombinatorialMap& map, NodeId v) {
  if (v < 0 || v >= map.node_count()) throw Error(ErrorKind::MalformedInput, "probe node out of range");
  std::vector<NodeId> nodes = map.adjacency()[v];
  nodes.push_back(v);
  return make_probe(map, std::move(nodes));
}

Eigen::VectorXd restrict_to(const ProbeSet& probe, const EdgeVector& x) {
  Eigen::VectorXd y(probe.m0());
  for (int i = 0; i < probe.m0(); ++i) y[i] = x[probe.edges[i]];
  return y;
}

}  // namespace genus
