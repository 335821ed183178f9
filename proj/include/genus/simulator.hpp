#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "genus/circulation.hpp"
#include "genus/map.hpp"
#include "genus/rng.hpp"

namespace genus {

enum class Schedule {
  /// Each step: balance a uniform node, then a uniform face, then with
  /// probability p excite a uniform edge.
  RoundBased,
  /// Independent Poisson clocks; per unit time the expected counts are one
  /// node balancing, one face balancing and p excitations.
  PoissonClocks,
};

struct ProcessConfig {
  double p = 0.01;
  Schedule schedule = Schedule::RoundBased;
  std::uint64_t seed = 0;
  long steps = 0;
  /// Observations are recorded at t = 0, stride, 2*stride, ...
  long record_stride = 1;
  /// Keep the full state x(t) alongside y(t).
  bool record_full_state = false;
};

/// Throws Error{MalformedInput} unless 0 <= p <= 1, steps >= 0 and stride >= 1.
void validate(const ProcessConfig& config);

/// Flushes subnormal doubles to zero on the calling thread while alive.
/// Decayed error parts otherwise drift into the subnormal range, where
/// arithmetic is many times slower; values below 1e-308 are irrelevant here.
class FlushSubnormals {
 public:
  FlushSubnormals();
  ~FlushSubnormals();
  FlushSubnormals(const FlushSubnormals&) = delete;
  FlushSubnormals& operator=(const FlushSubnormals&) = delete;

 private:
  unsigned saved_ = 0;
};

enum class EventKind { NodeBalance, FaceBalance, Excitation };

struct ProcessEvent {
  EventKind kind;
  int id;  // node, face or edge
};

/// Subtracts the component of x along the incidence vector; no-op when the
/// vector is zero.
void balance(EdgeVector& x, std::span<const Incidence> incidence);

/// The noisy circulator: state x(t) with its random source. Keeps a
/// reference to `map`, which must outlive it.
class NoisyCirculator {
 public:
  NoisyCirculator(const CombinatorialMap& map, const ProcessConfig& config, EdgeVector initial = {});

  /// Advances by one round (round-based) or one unit of time (Poisson).
  void step();

  const EdgeVector& state() const { return x_; }
  long time() const { return t_; }
  /// Operations applied by the last step, in order.
  const std::vector<ProcessEvent>& last_events() const { return events_; }

  void apply(const ProcessEvent& event, EdgeVector& x) const;

 private:
  void round_step();
  void poisson_step();
  void fire(const ProcessEvent& event);

  const CombinatorialMap* map_;
  ProcessConfig config_;
  Rng rng_;
  EdgeVector x_;
  long t_ = 0;
  double clock_ = 0.0;
  double next_event_ = 0.0;
  std::vector<ProcessEvent> events_;
};

struct ObservationTrace {
  ProbeSet probe;
  std::vector<long> times;
  std::vector<Eigen::VectorXd> y;
  /// (step, edge) of every excitation.
  std::vector<std::pair<long, EdgeId>> excitations;
  /// Present when ProcessConfig::record_full_state is set.
  std::vector<EdgeVector> x;
};

ObservationTrace run(const CombinatorialMap& map, const ProbeSet& probe, const ProcessConfig& config,
                     const EdgeVector& initial = {});

struct InstrumentOptions {
  /// Window for the old/new error split X1 / X2.
  long lag = 0;
  /// Maximum number of propagated excitation vectors.
  long max_tracked = 20000;
  /// Maximum tracked-vector entries (vectors times m).
  long max_entries = 20'000'000;
};

/// Per-step decay bookkeeping. Index s runs over steps 0..T.
struct DecayInstrumentation {
  std::vector<double> smooth_norm;   // |x'(s)|
  std::vector<double> error_norm;    // |x''(s)|
  std::vector<double> old_error;     // |X1(s, a)|
  std::vector<double> new_error;     // |X2(s, a)|
  std::vector<EdgeId> excited;       // first edge excited in step s, or -1
  std::vector<double> xw_residual;   // |x''(s) - sum_t w(t, s)|
  std::vector<double> smooth_drift;  // |x'(s) - x'(s-1)| for steps without excitation, else 0
  std::vector<EdgeVector> smooth_part;  // x'(s), only at recorded times
  std::vector<EdgeVector> error_part;   // x''(s), only at recorded times
  double max_xw_residual = 0.0;
  double max_smooth_drift = 0.0;
};

/// run() plus the decomposition of every state into smooth and error
/// parts, and the propagation u(t, s) of every excitation (the initial
/// state counts as the excitation at t = 0). Throws Error{CapExceeded}
/// when the tracked vectors would exceed the configured limits.
std::pair<ObservationTrace, DecayInstrumentation> instrumented_run(const CombinatorialMap& map,
                                                                   const ProbeSet& probe,
                                                                   const ProcessConfig& config,
                                                                   const EdgeVector& initial = {},
                                                                   const InstrumentOptions& options = {});

}  // namespace genus
