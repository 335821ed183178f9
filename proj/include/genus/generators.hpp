#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "genus/map.hpp"

namespace genus {

/// k x k grid of nodes on the sphere (k >= 2).
CombinatorialMap planar_grid(int k);
/// k x k grid with wrap-around edges on the torus (k >= 1); n = k^2, m = 2k^2, f = k^2.
CombinatorialMap torus_grid(int k);
/// One node with 2g loops in the a1 b1 a1^-1 b1^-1 ... pattern; a single face (g >= 1).
CombinatorialMap canonical_polygon(int g);
/// k-cycle on the sphere (k >= 1).
CombinatorialMap sphere_cycle(int k);
/// Two nodes joined by one edge, on the sphere.
CombinatorialMap single_edge();
/// K4 with its planar rotation.
CombinatorialMap tetrahedron();

/// Barycentric subdivision: adds a node per edge and per face and
/// triangulates. Genus is preserved; the result has n + m + f nodes,
/// 6m edges and 4m triangular faces.
CombinatorialMap barycentric_subdivision(const CombinatorialMap& map);

/// True if the map has no loops and no parallel edges.
bool is_simple(const CombinatorialMap& map);

/// Glues a planar k x k grid into a corner at node `w` of `host`, sharing
/// only w. The grid is a planar block behind a cut vertex, so every smooth
/// circulation vanishes on it.
CombinatorialMap attach_planar_grid(const CombinatorialMap& host, NodeId w, int k);

/// Builds a map from a generator spec:
///   planar_grid:K  torus_grid:K  canonical_polygon:G  cycle:K  edge  tetrahedron
///   subdivided:<spec>   blob:K:<spec>
/// subdivided:<spec> subdivides once, or twice if one pass is not simple.
/// Throws Error{UnsupportedParams} on unknown kinds or invalid parameters.
CombinatorialMap generate(std::string_view spec);

/// Corpus used by the acceptance suite and `genus verify`: planar_grid 2-4,
/// torus_grid 2-4, canonical_polygon 1-3 and subdivided variants.
std::vector<std::pair<std::string, CombinatorialMap>> standard_corpus();

/// Genus 1 and 2 maps of the standard corpus, plus blob maps (a planar
/// grid hung off a node) whose smooth circulations all vanish on the blob.
std::vector<std::pair<std::string, CombinatorialMap>> separation_corpus();

}  // namespace genus
