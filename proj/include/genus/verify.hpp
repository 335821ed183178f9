#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "genus/circulation.hpp"
#include "genus/map.hpp"

namespace genus {

struct CutOptions {
  /// Allow cut nodes inside the target set (they then stop counting as
  /// targets). Sources are never removable.
  bool target_removable = false;
};

struct CutResult {
  std::vector<NodeId> source;
  std::vector<NodeId> target;
  int size = 0;
  std::vector<NodeId> cut;
};

/// Minimum node set whose removal leaves no path from S1 to S2, by unit
/// node capacities on the split graph. By default the cut avoids S1 and S2
/// and Error{NotSeparable} is thrown when the sets touch. Every result is
/// certified by a reachability search; Error{MalformedInput} for empty or
/// overlapping sets.
CutResult min_vertex_cut(const CombinatorialMap& map, std::vector<NodeId> sources, std::vector<NodeId> targets,
                         const CutOptions& options = {});

/// True when no path joins `sources` to the targets outside `removed`.
bool separates(const CombinatorialMap& map, const std::vector<NodeId>& sources, const std::vector<NodeId>& targets,
               const std::vector<NodeId>& removed);

struct CheckOptions {
  bool throw_on_failure = true;
};

struct NonvanishReport {
  bool vacuous = false;  // g = 0
  bool passed = true;
  double min_norm = 0.0;
  EdgeId min_edge = -1;
  bool exact_checked = false;
  int exact_zero_count = 0;
  nlohmann::json witness;
};

struct NonvanishOptions : CheckOptions {
  double float_tolerance = 1e-12;
  int exact_cap = 40;
};

/// |eta_e| > 0 for every edge, in floating point and, for maps under the
/// exact cap, in exact arithmetic. Throws CheckFailed with the offending
/// edge unless `throw_on_failure` is cleared.
NonvanishReport nonvanish_check(const CombinatorialMap& map, const NonvanishOptions& options = {});

struct VanishingComponent {
  std::vector<NodeId> nodes;
  CutResult cut;
};

struct VanishingReport {
  double tolerance = 0.0;
  std::vector<EdgeId> support;    // |h_e| > tolerance
  std::vector<EdgeId> vanishing;  // the rest
  std::vector<NodeId> support_nodes;
  std::vector<VanishingComponent> components;
  int bound = 0;  // 16 g
  bool passed = true;
  nlohmann::json witness;
};

struct SeparationOptions : CheckOptions {
  /// Entries with |h_e| <= relative_tolerance * |h| count as vanishing.
  double relative_tolerance = 1e-10;
};

/// For every connected set U of nodes whose incident edges all vanish,
/// U is separated from the support of h by at most 16g nodes. Throws
/// Error{NotACirculation} if h is not smooth or is zero.
VanishingReport separation_check(const CombinatorialMap& map, const EdgeVector& h,
                                 const SeparationOptions& options = {});

/// A random nonzero smooth circulation forced to vanish on up to 2g - 1
/// edges incident with `v` (in rotation order, loops once): a Gaussian
/// combination of the null space of the basis rows of those edges.
EdgeVector forced_vanishing_circulation(const CombinatorialMap& map, const SmoothBasis& basis, NodeId v,
                                        std::uint64_t seed);

/// Size of a minimum node cut between U and V \ N[U]; -1 when U's closed
/// neighbourhood is everything.
int probe_separation(const CombinatorialMap& map, const std::vector<NodeId>& probe_nodes);

/// Sufficient surrogate for the probe condition: the cut between U and
/// the nodes outside its closed neighbourhood has at least 16 g_bar nodes.
bool probe_admissible(const CombinatorialMap& map, const std::vector<NodeId>& probe_nodes, int g_bar);

struct ConvergenceOptions : CheckOptions {
  int trials = 500;
  std::vector<long> times{10, 50, 100, 200};
  EdgeId edge = 0;
  std::uint64_t seed = 1;
};

struct ConvergenceReport {
  double mu = 0.0;
  double initial_error = 0.0;  // |x''(0)|^2
  double slack = 0.0;          // 5 / sqrt(trials)
  std::vector<long> times;
  std::vector<double> mean_error;  // mean |x''(t)|^2 over trials
  std::vector<double> bound;       // (1 - mu)^t |x''(0)|^2
  bool passed = true;
  long worst_time = -1;
  nlohmann::json witness;
};

/// Balancing only (p = 0) from x(0) = chi_e: the mean squared error part
/// must stay below (1 - mu)^t |x''(0)|^2 (1 + 5/sqrt(trials)).
ConvergenceReport convergence_check(const CombinatorialMap& map, const ConvergenceOptions& options = {});

nlohmann::json to_json(const CutResult& cut);
nlohmann::json to_json(const NonvanishReport& report);
nlohmann::json to_json(const VanishingReport& report);
nlohmann::json to_json(const ConvergenceReport& report);

}  // namespace genus
