// Serial reference vs OpenMP kernels: wall time and result equality.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "genus/circulation.hpp"
#include "genus/generators.hpp"
#include "genus/kernels.hpp"

using namespace genus;

namespace {

template <class F>
double seconds(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool same(const std::vector<TrialOutcome>& a, const std::vector<TrialOutcome>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].seed != b[i].seed || a[i].estimate.genus != b[i].estimate.genus ||
        a[i].estimate.selected != b[i].estimate.selected) {
      return false;
    }
  }
  return true;
}

template <class R>
void compare(const char* name, std::function<R(Execution)> kernel, std::function<bool(const R&, const R&)> equal) {
  R serial, parallel;
  const double ts = seconds([&] { serial = kernel(Execution::Serial); });
  const double tp = seconds([&] { parallel = kernel(Execution::Parallel); });
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n", name, ts, tp, ts / tp,
              equal(serial, parallel) ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", parallel_threads());

  const auto big = generate("subdivided:canonical_polygon:3");
  const CirculationSpace space(big);
  compare<Eigen::MatrixXd>(
      "smooth_projections m=216", [&](Execution e) { return smooth_projections(space, e); },
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return a == b; });

  const CirculationSpace t4(torus_grid(4));
  compare<std::vector<double>>(
      "mean_error_curve 2000 trials", [&](Execution e) { return mean_error_curve(t4, 0, 2000, {10, 50, 200}, 1, e); },
      [](const std::vector<double>& a, const std::vector<double>& b) { return a == b; });

  const auto map = torus_grid(3);
  const ProbeSet probe = neighbourhood_probe(map, 0);
  const MapStats s = map.stats();
  const auto config = EstimateConfig::practical(s.n + s.m + s.f, 2, probe.m0(), 0.002);
  ProcessConfig process;
  process.p = 0.002;
  compare<std::vector<TrialOutcome>>(
      "estimate_trials 16 trials", [&](Execution e) { return estimate_trials(map, probe, process, config, 16, 3, e); },
      same);

  const auto synth = EstimateConfig::practical(100, 3, 12, 1.0);
  compare<std::vector<TrialOutcome>>(
      "synthetic_trials 2000 trials", [&](Execution e) { return synthetic_trials(12, 6, 1e-7, synth, 2000, 5, e); },
      same);
  return 0;
}
