#include "genus/simulator.hpp"

#include <cmath>
#include <string>

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

#include "genus/error.hpp"

namespace genus {

#if defined(__SSE2__)
// FTZ (bit 15) and DAZ (bit 6).
FlushSubnormals::FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040); }
FlushSubnormals::~FlushSubnormals() { _mm_setcsr(saved_); }
#else
FlushSubnormals::FlushSubnormals() = default;
FlushSubnormals::~FlushSubnormals() = default;
#endif

void validate(const ProcessConfig& config) {
  if (!(config.p >= 0.0 && config.p <= 1.0)) throw Error(ErrorKind::MalformedInput, "p must lie in [0, 1]");
  if (config.steps < 0) throw Error(ErrorKind::MalformedInput, "steps must be non-negative");
  if (config.record_stride < 1) throw Error(ErrorKind::MalformedInput, "record stride must be positive");
}

void balance(EdgeVector& x, std::span<const Incidence> incidence) {
  if (incidence.empty()) return;
  double dot = 0.0;
  for (const auto& [e, s] : incidence) dot += s * x[e];
  const double c = dot / static_cast<double>(incidence.size());
  for (const auto& [e, s] : incidence) x[e] -= c * s;
}

NoisyCirculator::NoisyCirculator(const CombinatorialMap& map, const ProcessConfig& config, EdgeVector initial)
    : map_(&map), config_(config), rng_(derive_seed(config.seed, Stream::Process)) {
  validate(config);
  if (initial.size() == 0) initial = EdgeVector::Zero(map.edge_count());
  if (initial.size() != map.edge_count()) throw Error(ErrorKind::DimensionMismatch, "initial state has wrong length");
  x_ = std::move(initial);
  if (config_.schedule == Schedule::PoissonClocks) next_event_ = rng_.exponential(2.0 + config_.p);
}

void NoisyCirculator::apply(const ProcessEvent& event, EdgeVector& x) const {
  switch (event.kind) {
    case EventKind::NodeBalance: balance(x, map_->node_incidence(event.id)); break;
    case EventKind::FaceBalance: balance(x, map_->face_incidence(event.id)); break;
    case EventKind::Excitation: x[event.id] += 1.0; break;
  }
}

void NoisyCirculator::fire(const ProcessEvent& event) {
  apply(event, x_);
  events_.push_back(event);
}

void NoisyCirculator::round_step() {
  fire({EventKind::NodeBalance, static_cast<int>(rng_.uniform_index(map_->node_count()))});
  fire({EventKind::FaceBalance, static_cast<int>(rng_.uniform_index(map_->face_count()))});
  if (map_->edge_count() > 0 && rng_.bernoulli(config_.p)) {
    fire({EventKind::Excitation, static_cast<int>(rng_.uniform_index(map_->edge_count()))});
  }
}

// The superposition of all per-element clocks is one Poisson clock of rate
// 2 + p; each ring picks the class by rate and the element uniformly.
void NoisyCirculator::poisson_step() {
  const double total = 2.0 + config_.p;
  const double until = clock_ + 1.0;
  while (next_event_ <= until) {
    const double pick = rng_.uniform01() * total;
    if (pick < 1.0) {
      fire({EventKind::NodeBalance, static_cast<int>(rng_.uniform_index(map_->node_count()))});
    } else if (pick < 2.0) {
      fire({EventKind::FaceBalance, static_cast<int>(rng_.uniform_index(map_->face_count()))});
    } else if (map_->edge_count() > 0) {
      fire({EventKind::Excitation, static_cast<int>(rng_.uniform_index(map_->edge_count()))});
    }
    next_event_ += rng_.exponential(total);
  }
  clock_ = until;
}

void NoisyCirculator::step() {
  events_.clear();
  if (config_.schedule == Schedule::RoundBased) {
    round_step();
  } else {
    poisson_step();
  }
  ++t_;
}

namespace {

void record(ObservationTrace& trace, const NoisyCirculator& process, const ProcessConfig& config) {
  trace.times.push_back(process.time());
  trace.y.push_back(restrict_to(trace.probe, process.state()));
  if (config.record_full_state) trace.x.push_back(process.state());
}

}  // namespace

ObservationTrace run(const CombinatorialMap& map, const ProbeSet& probe, const ProcessConfig& config,
                     const EdgeVector& initial) {
  const FlushSubnormals flush;
  NoisyCirculator process(map, config, initial);
  ObservationTrace trace;
  trace.probe = probe;
  const long records = config.steps / config.record_stride + 1;
  trace.times.reserve(records);
  trace.y.reserve(records);
  record(trace, process, config);
  for (long s = 1; s <= config.steps; ++s) {
    process.step();
    for (const auto& event : process.last_events()) {
      if (event.kind == EventKind::Excitation) trace.excitations.emplace_back(s, event.id);
    }
    if (s % config.record_stride == 0) record(trace, process, config);
  }
  return trace;
}

std::pair<ObservationTrace, DecayInstrumentation> instrumented_run(const CombinatorialMap& map,
                                                                   const ProbeSet& probe,
                                                                   const ProcessConfig& config,
                                                                   const EdgeVector& initial,
                                                                   const InstrumentOptions& options) {
  const FlushSubnormals flush;
  const int m = map.edge_count();
  const double expected = config.p * static_cast<double>(config.steps);
  if (expected > static_cast<double>(options.max_tracked) ||
      expected * m > static_cast<double>(options.max_entries)) {
    throw Error(ErrorKind::CapExceeded, "instrumentation would track about " + std::to_string(expected) +
                                            " excitation vectors of length " + std::to_string(m));
  }

  const CirculationSpace space(map);
  NoisyCirculator process(map, config, initial);

  struct Tracked {
    long born;
    EdgeVector u;       // u(t, s)
    EdgeVector smooth;  // u3(t), invariant under balancing
  };
  std::vector<Tracked> tracked;
  auto track = [&](long born, EdgeVector u) {
    if (static_cast<long>(tracked.size()) >= options.max_tracked ||
        static_cast<long>(tracked.size() + 1) * m > options.max_entries) {
      throw Error(ErrorKind::CapExceeded, "too many excitations to track");
    }
    EdgeVector smooth = space.project_smooth(u);
    tracked.push_back({born, std::move(u), std::move(smooth)});
  };
  if (process.state().squaredNorm() > 0) track(0, process.state());

  ObservationTrace trace;
  trace.probe = probe;
  DecayInstrumentation inst;
  EdgeVector previous_smooth;

  auto measure = [&](long s, bool excited_now, EdgeId excited) {
    const auto parts = space.decompose(process.state());
    EdgeVector smooth = parts.x3;
    EdgeVector error = parts.x1 + parts.x2;
    EdgeVector sum_w = EdgeVector::Zero(m);
    EdgeVector old_part = EdgeVector::Zero(m);
    EdgeVector new_part = EdgeVector::Zero(m);
    for (const auto& item : tracked) {
      EdgeVector w = item.u - item.smooth;
      sum_w += w;
      if (options.lag > 0 && item.born > s - options.lag) {
        new_part += w;
      } else {
        old_part += w;
      }
    }
    const double residual = (error - sum_w).norm();
    const double drift = (s > 0 && !excited_now) ? (smooth - previous_smooth).norm() : 0.0;
    inst.smooth_norm.push_back(smooth.norm());
    inst.error_norm.push_back(error.norm());
    inst.old_error.push_back(old_part.norm());
    inst.new_error.push_back(new_part.norm());
    inst.excited.push_back(excited);
    inst.xw_residual.push_back(residual);
    inst.smooth_drift.push_back(drift);
    inst.max_xw_residual = std::max(inst.max_xw_residual, residual);
    inst.max_smooth_drift = std::max(inst.max_smooth_drift, drift);
    if (s % config.record_stride == 0) {
      trace.times.push_back(s);
      trace.y.push_back(restrict_to(probe, process.state()));
      if (config.record_full_state) trace.x.push_back(process.state());
      inst.smooth_part.push_back(smooth);
      inst.error_part.push_back(error);
    }
    previous_smooth = std::move(smooth);
  };

  measure(0, false, -1);
  for (long s = 1; s <= config.steps; ++s) {
    process.step();
    EdgeId first = -1;
    for (const auto& event : process.last_events()) {
      if (event.kind == EventKind::Excitation) {
        trace.excitations.emplace_back(s, event.id);
        if (first < 0) first = event.id;
        EdgeVector chi = EdgeVector::Zero(m);
        chi[event.id] = 1.0;
        track(s, std::move(chi));
      } else {
        // Balancing acts on every vector born before this event.
        for (auto& item : tracked) process.apply(event, item.u);
      }
    }
    measure(s, first >= 0, first);
  }
  return {std::move(trace), std::move(inst)};
}

}  // namespace genus
