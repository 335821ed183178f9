#include "genus/kernels.hpp"

#include <algorithm>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "genus/error.hpp"

namespace genus {

namespace {

template <typename Body>
void for_each_index(long count, Execution exec, Body&& body) {
  if (exec == Execution::Serial) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  // Exceptions cannot cross the parallel region; keep the first and rethrow.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(genus_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

int parallel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Eigen::MatrixXd smooth_projections(const CirculationSpace& space, Execution exec) {
  const int m = space.edge_count();
  Eigen::MatrixXd eta(m, m);
  for_each_index(m, exec, [&](long e) { eta.col(e) = space.smooth_projection_of_edge(static_cast<EdgeId>(e)); });
  return eta;
}

std::vector<double> mean_error_curve(const CirculationSpace& space, EdgeId edge, int trials,
                                     const std::vector<long>& times, std::uint64_t seed, Execution exec) {
  if (!std::is_sorted(times.begin(), times.end())) throw Error(ErrorKind::MalformedInput, "times must be sorted");
  const CombinatorialMap& map = space.map();
  const EdgeVector smooth = space.smooth_projection_of_edge(edge);
  EdgeVector start = EdgeVector::Zero(map.edge_count());
  start[edge] = 1.0;
  const long horizon = times.empty() ? 0 : times.back();

  std::vector<std::vector<double>> per_trial(trials, std::vector<double>(times.size()));
  for_each_index(trials, exec, [&](long i) {
    const FlushSubnormals flush;
    ProcessConfig config;
    config.p = 0.0;
    config.seed = derive_seed(seed, Stream::Convergence, static_cast<std::uint64_t>(i));
    NoisyCirculator process(map, config, start);
    std::size_t next = 0;
    for (long t = 0; t <= horizon; ++t) {
      if (t > 0) process.step();
      while (next < times.size() && times[next] == t) {
        per_trial[i][next++] = (process.state() - smooth).squaredNorm();
      }
    }
  });

  std::vector<double> mean(times.size(), 0.0);
  for (const auto& row : per_trial) {
    for (std::size_t j = 0; j < row.size(); ++j) mean[j] += row[j];
  }
  for (double& v : mean) v /= trials;
  return mean;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) { return mix64(mix64(seed) + static_cast<std::uint64_t>(trial)); }

std::vector<TrialOutcome> estimate_trials(const CombinatorialMap& map, const ProbeSet& probe,
                                          const ProcessConfig& process, const EstimateConfig& estimate, int trials,
                                          std::uint64_t seed, Execution exec) {
  validate(estimate);
  std::vector<TrialOutcome> outcomes(trials);
  for_each_index(trials, exec, [&](long i) {
    TrialOutcome& out = outcomes[i];
    out.trial = static_cast<int>(i);
    out.seed = trial_seed(seed, static_cast<int>(i));
    ProcessConfig config = process;
    config.seed = out.seed;
    config.steps = estimate.required_steps();
    config.record_stride = estimate.N;
    config.record_full_state = false;
    const ObservationTrace trace = run(map, probe, config);
    out.excitations = static_cast<long>(trace.excitations.size());
    out.estimate = genus_estimate(aggregate(trace, estimate), estimate, derive_seed(out.seed, Stream::Selection));
  });
  return outcomes;
}

std::vector<TrialOutcome> synthetic_trials(int m0, int d, double noise, const EstimateConfig& estimate, int trials,
                                           std::uint64_t seed, Execution exec) {
  validate(estimate);
  std::vector<TrialOutcome> outcomes(trials);
  for_each_index(trials, exec, [&](long i) {
    TrialOutcome& out = outcomes[i];
    out.trial = static_cast<int>(i);
    out.seed = trial_seed(seed, static_cast<int>(i));
    const auto samples = synthetic_samples(m0, d, estimate.T, noise, derive_seed(out.seed, Stream::Synthetic));
    out.estimate = genus_estimate(samples, estimate, derive_seed(out.seed, Stream::Selection));
  });
  return outcomes;
}

}  // namespace genus
