#include "genus/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "genus/error.hpp"
#include "genus/exact.hpp"
#include "genus/kernels.hpp"
#include "genus/rng.hpp"

namespace genus {

using nlohmann::json;

namespace {

// Dinic max flow on a small directed graph.
class FlowNetwork {
 public:
  static constexpr long kInfinity = std::numeric_limits<int>::max();

  explicit FlowNetwork(int size) : adjacency_(size), level_(size), cursor_(size) {}

  void add_arc(int from, int to, long capacity) {
    adjacency_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, capacity});
    adjacency_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, 0});
  }

  long max_flow(int source, int sink, long limit) {
    long flow = 0;
    while (flow < limit && levels(source, sink)) {
      std::fill(cursor_.begin(), cursor_.end(), 0);
      while (long pushed = push(source, sink, limit - flow)) flow += pushed;
    }
    return flow;
  }

  /// Nodes reachable from `source` in the residual graph.
  std::vector<char> residual_reach(int source) const {
    std::vector<char> seen(adjacency_.size(), 0);
    std::queue<int> queue;
    queue.push(source);
    seen[source] = 1;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (int id : adjacency_[u]) {
        const auto& arc = arcs_[id];
        if (arc.capacity > 0 && !seen[arc.to]) {
          seen[arc.to] = 1;
          queue.push(arc.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    long capacity;
  };

  bool levels(int source, int sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> queue;
    queue.push(source);
    level_[source] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (int id : adjacency_[u]) {
        const auto& arc = arcs_[id];
        if (arc.capacity > 0 && level_[arc.to] < 0) {
          level_[arc.to] = level_[u] + 1;
          queue.push(arc.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  long push(int u, int sink, long amount) {
    if (u == sink) return amount;
    for (auto& i = cursor_[u]; i < static_cast<int>(adjacency_[u].size()); ++i) {
      const int id = adjacency_[u][i];
      Arc& arc = arcs_[id];
      if (arc.capacity > 0 && level_[arc.to] == level_[u] + 1) {
        if (long pushed = push(arc.to, sink, std::min(amount, arc.capacity))) {
          arc.capacity -= pushed;
          arcs_[id ^ 1].capacity += pushed;
          return pushed;
        }
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> adjacency_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<int> cursor_;
};

std::vector<NodeId> sorted_unique(std::vector<NodeId> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

}  // namespace

bool separates(const CombinatorialMap& map, const std::vector<NodeId>& sources, const std::vector<NodeId>& targets,
               const std::vector<NodeId>& removed) {
  const int n = map.node_count();
  std::vector<char> blocked(n, 0), is_target(n, 0), seen(n, 0);
  for (NodeId v : removed) blocked[v] = 1;
  for (NodeId v : targets) is_target[v] = !blocked[v];
  const auto adj = map.adjacency();
  std::queue<NodeId> queue;
  for (NodeId s : sources) {
    if (blocked[s] || seen[s]) continue;
    seen[s] = 1;
    queue.push(s);
  }
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop();
    if (is_target[u]) return false;
    for (NodeId w : adj[u]) {
      if (!blocked[w] && !seen[w]) {
        seen[w] = 1;
        queue.push(w);
      }
    }
  }
  return true;
}

CutResult min_vertex_cut(const CombinatorialMap& map, std::vector<NodeId> sources, std::vector<NodeId> targets,
                         const CutOptions& options) {
  const int n = map.node_count();
  sources = sorted_unique(std::move(sources));
  targets = sorted_unique(std::move(targets));
  if (sources.empty() || targets.empty()) throw Error(ErrorKind::MalformedInput, "cut needs nonempty node sets");
  std::vector<char> is_source(n, 0), is_target(n, 0);
  for (NodeId v : sources) {
    if (v < 0 || v >= n) throw Error(ErrorKind::MalformedInput, "cut node out of range");
    is_source[v] = 1;
  }
  for (NodeId v : targets) {
    if (v < 0 || v >= n) throw Error(ErrorKind::MalformedInput, "cut node out of range");
    if (is_source[v]) throw Error(ErrorKind::MalformedInput, "source and target sets overlap");
    is_target[v] = 1;
  }

  // Node v splits into in = 2v and out = 2v + 1.
  const int super_source = 2 * n;
  const int super_sink = 2 * n + 1;
  FlowNetwork network(2 * n + 2);
  for (NodeId v = 0; v < n; ++v) {
    const bool fixed = is_source[v] || (is_target[v] && !options.target_removable);
    network.add_arc(2 * v, 2 * v + 1, fixed ? FlowNetwork::kInfinity : 1);
    if (is_source[v]) network.add_arc(super_source, 2 * v, FlowNetwork::kInfinity);
    if (is_target[v]) network.add_arc(2 * v + 1, super_sink, FlowNetwork::kInfinity);
  }
  for (const auto& [t, h] : map.edges()) {
    if (t == h) continue;
    network.add_arc(2 * t + 1, 2 * h, FlowNetwork::kInfinity);
    network.add_arc(2 * h + 1, 2 * t, FlowNetwork::kInfinity);
  }
  const long flow = network.max_flow(super_source, super_sink, n + 1);
  if (flow > n) throw Error(ErrorKind::NotSeparable, "source and target sets are adjacent");

  const auto reach = network.residual_reach(super_source);
  CutResult result;
  result.source = sources;
  result.target = targets;
  for (NodeId v = 0; v < n; ++v) {
    if (reach[2 * v] && !reach[2 * v + 1]) result.cut.push_back(v);
  }
  result.size = static_cast<int>(result.cut.size());
  if (result.size != flow || !separates(map, sources, targets, result.cut)) {
    throw CheckFailed("vertex cut certificate failed", to_json(result).dump());
  }
  return result;
}

NonvanishReport nonvanish_check(const CombinatorialMap& map, const NonvanishOptions& options) {
  NonvanishReport report;
  if (map.genus() == 0) {
    report.vacuous = true;
    return report;
  }
  const CirculationSpace space(map);
  const Eigen::MatrixXd eta = smooth_projections(space);
  report.min_norm = std::numeric_limits<double>::infinity();
  for (EdgeId e = 0; e < map.edge_count(); ++e) {
    const double norm = eta.col(e).norm();
    if (norm < report.min_norm) {
      report.min_norm = norm;
      report.min_edge = e;
    }
  }
  if (!(report.min_norm >= options.float_tolerance)) {
    report.passed = false;
    report.witness = {{"edge", report.min_edge}, {"norm", report.min_norm}, {"arithmetic", "float"}};
  }
  if (map.edge_count() <= options.exact_cap) {
    report.exact_checked = true;
    const ExactProjector exact(map, options.exact_cap);
    for (EdgeId e = 0; e < map.edge_count(); ++e) {
      const auto col = exact.eta(e);
      const bool zero = std::all_of(col.begin(), col.end(), [](const Rational& q) { return q == 0; });
      if (zero) {
        ++report.exact_zero_count;
        if (report.passed) {
          report.passed = false;
          report.witness = {{"edge", e}, {"arithmetic", "exact"}};
        }
      }
    }
  }
  if (!report.passed && options.throw_on_failure) {
    throw CheckFailed("smooth projection of an edge vanishes", report.witness.dump());
  }
  return report;
}

VanishingReport separation_check(const CombinatorialMap& map, const EdgeVector& h, const SeparationOptions& options) {
  const CirculationSpace space(map);
  if (h.size() != map.edge_count()) throw Error(ErrorKind::DimensionMismatch, "edge vector has wrong length");
  const double norm = h.norm();
  if (!(norm > 0)) throw Error(ErrorKind::NotACirculation, "h must be nonzero");
  const double defect = std::max((space.node_incidence().transpose() * h).norm(),
                                 (space.face_incidence().transpose() * h).norm());
  if (defect > 1e-9 * norm) throw Error(ErrorKind::NotACirculation, "h is not smooth (defect " + std::to_string(defect) + ")");

  VanishingReport report;
  report.tolerance = options.relative_tolerance * norm;
  report.bound = 16 * map.genus();
  const int n = map.node_count();
  std::vector<char> touches_support(n, 0);
  for (EdgeId e = 0; e < map.edge_count(); ++e) {
    if (std::abs(h[e]) > report.tolerance) {
      report.support.push_back(e);
      touches_support[map.tail(e)] = touches_support[map.head(e)] = 1;
    } else {
      report.vanishing.push_back(e);
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (touches_support[v]) report.support_nodes.push_back(v);
  }

  // Components of nodes all of whose incident edges vanish.
  const auto adj = map.adjacency();
  std::vector<int> component(n, -1);
  for (NodeId start = 0; start < n; ++start) {
    if (touches_support[start] || component[start] >= 0) continue;
    VanishingComponent comp;
    const int id = static_cast<int>(report.components.size());
    std::queue<NodeId> queue;
    queue.push(start);
    component[start] = id;
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop();
      comp.nodes.push_back(u);
      for (NodeId w : adj[u]) {
        if (!touches_support[w] && component[w] < 0) {
          component[w] = id;
          queue.push(w);
        }
      }
    }
    std::sort(comp.nodes.begin(), comp.nodes.end());
    comp.cut = min_vertex_cut(map, comp.nodes, report.support_nodes, CutOptions{.target_removable = true});
    if (comp.cut.size > report.bound && report.passed) {
      report.passed = false;
      report.witness = {{"component", comp.nodes}, {"cut", to_json(comp.cut)}, {"bound", report.bound}};
    }
    report.components.push_back(std::move(comp));
  }
  if (!report.passed && options.throw_on_failure) {
    throw CheckFailed("vanishing component needs more than 16g separating nodes", report.witness.dump());
  }
  return report;
}

EdgeVector forced_vanishing_circulation(const CombinatorialMap& map, const SmoothBasis& basis, NodeId v,
                                        std::uint64_t seed) {
  if (basis.dimension == 0) throw Error(ErrorKind::NotACirculation, "no nonzero smooth circulation on a planar map");
  if (v < 0 || v >= map.node_count()) throw Error(ErrorKind::MalformedInput, "node out of range");
  std::vector<EdgeId> forced;
  for (Dart d : map.rotation()[v]) {
    const EdgeId e = dart_edge(d);
    if (static_cast<int>(forced.size()) < basis.dimension - 1 &&
        std::find(forced.begin(), forced.end(), e) == forced.end()) {
      forced.push_back(e);
    }
  }
  Eigen::MatrixXd rows(forced.size(), basis.dimension);
  for (std::size_t i = 0; i < forced.size(); ++i) rows.row(i) = basis.vectors.row(forced[i]);
  Eigen::MatrixXd null_space;
  if (forced.empty()) {
    null_space = Eigen::MatrixXd::Identity(basis.dimension, basis.dimension);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) rank += s[i] > 1e-9 * std::max(1.0, s[0]);
    null_space = svd.matrixV().rightCols(basis.dimension - rank);
  }
  Rng rng(derive_seed(seed, Stream::Circulation));
  Eigen::VectorXd c(null_space.cols());
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = rng.normal();
  EdgeVector h = basis.vectors * (null_space * c);
  for (EdgeId e : forced) h[e] = 0.0;
  return h;
}

int probe_separation(const CombinatorialMap& map, const std::vector<NodeId>& probe_nodes) {
  const ProbeSet probe = make_probe(map, probe_nodes);
  const int n = map.node_count();
  std::vector<char> closed(n, 0);
  for (EdgeId e : probe.edges) closed[map.tail(e)] = closed[map.head(e)] = 1;
  for (NodeId v : probe.nodes) closed[v] = 1;
  std::vector<NodeId> outside;
  for (NodeId v = 0; v < n; ++v) {
    if (!closed[v]) outside.push_back(v);
  }
  if (outside.empty()) return -1;
  return min_vertex_cut(map, probe.nodes, outside).size;
}

bool probe_admissible(const CombinatorialMap& map, const std::vector<NodeId>& probe_nodes, int g_bar) {
  const int cut = probe_separation(map, probe_nodes);
  return cut >= 0 && cut >= 16 * g_bar;
}

ConvergenceReport convergence_check(const CombinatorialMap& map, const ConvergenceOptions& options) {
  if (options.trials < 1) throw Error(ErrorKind::MalformedInput, "convergence check needs at least one trial");
  if (options.edge < 0 || options.edge >= map.edge_count()) throw Error(ErrorKind::MalformedInput, "edge out of range");
  const CirculationSpace space(map);
  ConvergenceReport report;
  report.mu = eigengap(map).mu;
  const EdgeVector smooth = space.smooth_projection_of_edge(options.edge);
  report.initial_error = 1.0 - smooth.squaredNorm();
  report.slack = 5.0 / std::sqrt(static_cast<double>(options.trials));
  report.times = options.times;
  std::sort(report.times.begin(), report.times.end());
  report.mean_error = mean_error_curve(space, options.edge, options.trials, report.times, options.seed);

  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    const double bound = std::pow(1.0 - report.mu, static_cast<double>(report.times[i])) * report.initial_error;
    report.bound.push_back(bound);
    const double allowed = bound * (1.0 + report.slack);
    // Tiny absolute floor for round-off once the error has decayed to zero.
    const bool ok = report.mean_error[i] <= allowed + 1e-24;
    const double ratio = allowed > 0 ? report.mean_error[i] / allowed : (ok ? 0.0 : INFINITY);
    if (!ok && ratio >= worst_ratio) {
      worst_ratio = ratio;
      report.passed = false;
      report.worst_time = report.times[i];
      report.witness = {{"t", report.times[i]}, {"mean", report.mean_error[i]}, {"allowed", allowed}};
    }
  }
  if (!report.passed && options.throw_on_failure) {
    throw CheckFailed("mean error exceeds the spectral decay bound", report.witness.dump());
  }
  return report;
}

json to_json(const CutResult& cut) {
  return json{{"source", cut.source}, {"target", cut.target}, {"size", cut.size}, {"cut", cut.cut}};
}

json to_json(const NonvanishReport& report) {
  json out{{"vacuous", report.vacuous},
           {"passed", report.passed},
           {"min_norm", report.min_norm},
           {"min_edge", report.min_edge},
           {"exact_checked", report.exact_checked},
           {"exact_zero_count", report.exact_zero_count}};
  if (!report.witness.is_null()) out["witness"] = report.witness;
  return out;
}

json to_json(const VanishingReport& report) {
  json components = json::array();
  for (const auto& c : report.components) components.push_back({{"nodes", c.nodes}, {"cut", to_json(c.cut)}});
  json out{{"tolerance", report.tolerance},
           {"support_edges", report.support.size()},
           {"vanishing_edges", report.vanishing.size()},
           {"support_nodes", report.support_nodes.size()},
           {"bound", report.bound},
           {"passed", report.passed},
           {"components", std::move(components)}};
  if (!report.witness.is_null()) out["witness"] = report.witness;
  return out;
}

json to_json(const ConvergenceReport& report) {
  json out{{"mu", report.mu},
           {"initial_error", report.initial_error},
           {"slack", report.slack},
           {"times", report.times},
           {"mean_error", report.mean_error},
           {"bound", report.bound},
           {"passed", report.passed},
           {"worst_time", report.worst_time}};
  if (!report.witness.is_null()) out["witness"] = report.witness;
  return out;
}

}  // namespace genus
