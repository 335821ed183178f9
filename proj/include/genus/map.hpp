#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace genus {

using NodeId = int;
using EdgeId = int;
using FaceId = int;

/// Real vector indexed by edge id.
using EdgeVector = Eigen::VectorXd;

struct Edge {
  NodeId tail = 0;
  NodeId head = 0;
};

/// Darts (edge-ends) are numbered 2e for the tail end of edge e and
/// 2e+1 for its head end. A dart is directed away from the node it sits at.
using Dart = int;

constexpr Dart tail_dart(EdgeId e) { return 2 * e; }
constexpr Dart head_dart(EdgeId e) { return 2 * e + 1; }
constexpr EdgeId dart_edge(Dart d) { return d / 2; }
constexpr Dart opposite(Dart d) { return d ^ 1; }
constexpr int dart_sign(Dart d) { return (d & 1) ? -1 : 1; }

/// Nonzero entry of an incidence vector.
struct Incidence {
  EdgeId edge;
  int sign;
};

struct MapStats {
  int n = 0;
  int m = 0;
  int f = 0;
  int g = 0;
  std::vector<int> node_degrees;  // |delta v|^2
  std::vector<int> face_lengths;  // |boundary F|^2
};

/// A connected graph cellularly embedded in a closed orientable surface,
/// stored as a rotation system. Faces are traced from the rotation and
/// are therefore always discs.
///
/// Rotation lists give the counter-clockwise cyclic order of darts around
/// each node. Faces are orbits of d -> next_ccw(opposite(d)); the face of
/// dart d lies on the right of d, so r(e) = face(2e) and l(e) = face(2e+1).
class CombinatorialMap {
 public:
  /// Validates and traces faces. Throws Error{MalformedRotation} when a
  /// dart is missing, duplicated or listed at the wrong node, and
  /// Error{DisconnectedGraph} when the underlying graph is disconnected.
  static CombinatorialMap build(int node_count, std::vector<Edge> edges,
                                std::vector<std::vector<Dart>> rotation);

  int node_count() const { return static_cast<int>(rotation_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }
  int genus() const { return genus_; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  NodeId tail(EdgeId e) const { return edges_[e].tail; }
  NodeId head(EdgeId e) const { return edges_[e].head; }
  FaceId right_shore(EdgeId e) const { return dart_face_[tail_dart(e)]; }
  FaceId left_shore(EdgeId e) const { return dart_face_[head_dart(e)]; }

  NodeId dart_node(Dart d) const { return (d & 1) ? edges_[d / 2].head : edges_[d / 2].tail; }
  FaceId dart_face(Dart d) const { return dart_face_[d]; }
  Dart next_ccw(Dart d) const { return next_ccw_[d]; }

  const std::vector<std::vector<Dart>>& rotation() const { return rotation_; }
  /// Darts of each face in boundary-walk order (face on the right).
  const std::vector<std::vector<Dart>>& faces() const { return faces_; }

  /// Net nonzero entries of delta v and of boundary F.
  std::span<const Incidence> node_incidence(NodeId v) const { return node_incidence_[v]; }
  std::span<const Incidence> face_incidence(FaceId f) const { return face_incidence_[f]; }

  /// |delta v|^2 and |boundary F|^2, net of loop / doubled-shore cancellation.
  int node_degree(NodeId v) const { return static_cast<int>(node_incidence_[v].size()); }
  int face_length(FaceId f) const { return static_cast<int>(face_incidence_[f].size()); }

  /// Number of darts at v (a loop counts twice), and number of darts on F.
  int rotation_degree(NodeId v) const { return static_cast<int>(rotation_[v].size()); }

  MapStats stats() const;

  /// Adjacency lists of the underlying multigraph (loops omitted).
  std::vector<std::vector<NodeId>> adjacency() const;

 private:
  CombinatorialMap() = default;

  std::vector<Edge> edges_;
  std::vector<std::vector<Dart>> rotation_;
  std::vector<Dart> next_ccw_;
  std::vector<FaceId> dart_face_;
  std::vector<std::vector<Dart>> faces_;
  std::vector<std::vector<Incidence>> node_incidence_;
  std::vector<std::vector<Incidence>> face_incidence_;
  int genus_ = 0;
};

/// Euler genus (2 - n + m - f) / 2.
int genus(const CombinatorialMap& map);

/// Dual map: nodes are faces of `map`; edge e runs from l(e) to r(e).
/// Taking the dual twice gives `map` with every edge reversed.
CombinatorialMap dual(const CombinatorialMap& map);

EdgeVector coboundary(const CombinatorialMap& map, NodeId v);
EdgeVector boundary(const CombinatorialMap& map, FaceId f);

/// Observed region: a connected node set U and the edges incident with it.
struct ProbeSet {
  std::vector<NodeId> nodes;  // U, sorted
  std::vector<EdgeId> edges;  // E0, sorted
  int m0() const { return static_cast<int>(edges.size()); }
};

/// Throws Error{MalformedInput} if U is empty, references a missing node,
/// or does not induce a connected subgraph.
ProbeSet make_probe(const CombinatorialMap& map, std::vector<NodeId> nodes);

/// U = {v} together with all neighbours of v.
ProbeSet neighbourhood_probe(const CombinatorialMap& map, NodeId v);

/// Restriction of an edge vector to the probe's edges, in probe order.
Eigen::VectorXd restrict_to(const ProbeSet& probe, const EdgeVector& x);

}  // namespace genus
