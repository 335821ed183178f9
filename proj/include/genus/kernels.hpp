#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "genus/circulation.hpp"
#include "genus/estimator.hpp"
#include "genus/simulator.hpp"

// Data-parallel kernels. Each has an OpenMP path and a serial reference
// path; both produce bit-identical results because per-item work is
// independent and every reduction runs in item order afterwards.

namespace genus {

enum class Execution { Serial, Parallel };

/// Number of OpenMP threads available (1 without OpenMP).
int parallel_threads();

/// m x m matrix whose column e is eta_e.
Eigen::MatrixXd smooth_projections(const CirculationSpace& space, Execution exec = Execution::Parallel);

/// Squared error |x(t) - eta_e|^2 of a balancing-only run from chi_e,
/// averaged over trials, at each requested time (sorted ascending).
/// Trial i draws from derive_seed(seed, Stream::Convergence, i).
std::vector<double> mean_error_curve(const CirculationSpace& space, EdgeId edge, int trials,
                                     const std::vector<long>& times, std::uint64_t seed,
                                     Execution exec = Execution::Parallel);

struct TrialOutcome {
  int trial = 0;
  std::uint64_t seed = 0;
  long excitations = 0;
  GenusEstimate estimate;
};

/// Seed of trial i in a batch.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

/// Full pipeline per trial: simulate N*T steps (recording every N), aggregate
/// and estimate. `process.seed` is replaced by the trial seed and
/// `process.steps` / `record_stride` by the estimate's requirements.
std::vector<TrialOutcome> estimate_trials(const CombinatorialMap& map, const ProbeSet& probe,
                                          const ProcessConfig& process, const EstimateConfig& estimate,
                                          int trials, std::uint64_t seed, Execution exec = Execution::Parallel);

/// Synthetic-sample trials: each draws samples from a random d-dimensional
/// subspace and runs the estimator on them.
std::vector<TrialOutcome> synthetic_trials(int m0, int d, double noise, const EstimateConfig& estimate, int trials,
                                           std::uint64_t seed, Execution exec = Execution::Parallel);

}  // namespace genus
