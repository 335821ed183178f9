#include "genus/estimator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "genus/error.hpp"

namespace genus {

long aggregation_length(double p) {
  if (!(p > 0.0)) throw Error(ErrorKind::MalformedInput, "aggregation needs p > 0");
  return std::max(1L, std::lround(1.0 / p));
}

EstimateConfig EstimateConfig::paper_faithful(long n_bar, int g_bar, int m0, double p) {
  EstimateConfig c;
  c.mode = EstimateMode::PaperFaithful;
  c.n_bar = n_bar;
  c.g_bar = g_bar;
  c.m0 = m0;
  c.p = p;
  c.N = aggregation_length(p);
  c.T_prime = 6 * (n_bar + g_bar);
  c.T = 4 * c.T_prime * c.T_prime;
  c.log_epsilon = -static_cast<double>(m0) * static_cast<double>(n_bar) * std::log(static_cast<double>(n_bar));
  c.epsilon = std::exp(c.log_epsilon);
  if (!(c.epsilon > 0.0)) {
    c.epsilon = std::numeric_limits<double>::denorm_min();
    c.epsilon_underflow = true;
  }
  return c;
}

EstimateConfig EstimateConfig::practical(long n_bar, int g_bar, int m0, double p, double epsilon, long T_prime,
                                         long T) {
  EstimateConfig c;
  c.mode = EstimateMode::Practical;
  c.n_bar = n_bar;
  c.g_bar = g_bar;
  c.m0 = m0;
  c.p = p;
  c.N = aggregation_length(p);
  c.T_prime = T_prime;
  c.T = T;
  c.epsilon = epsilon;
  c.log_epsilon = std::log(epsilon);
  return c;
}

void validate(const EstimateConfig& config) {
  if (config.N < 1) throw Error(ErrorKind::MalformedInput, "N must be at least 1");
  if (config.T_prime < 1 || config.T < config.T_prime) throw Error(ErrorKind::MalformedInput, "need T >= T' >= 1");
  if (!(config.epsilon > 0.0)) throw Error(ErrorKind::MalformedInput, "epsilon must be positive");
  if (config.g_bar < 0) throw Error(ErrorKind::MalformedInput, "g_bar must be non-negative");
}

double practical_excitation_probability(double mu, double epsilon, double target) {
  return target * mu / (10.0 * std::log(4.0 / epsilon));
}

AggregatedSamples aggregate(const ObservationTrace& trace, const EstimateConfig& config) {
  validate(config);
  // Observation times are 0, stride, 2 stride, ...; aggregation points must land on them.
  const long stride = trace.times.size() > 1 ? trace.times[1] - trace.times[0] : 1;
  const long last = trace.times.empty() ? -1 : trace.times.back();
  if (last < config.N * config.T) {
    throw Error(ErrorKind::TraceTooShort, "trace ends at t = " + std::to_string(last) + ", need N*T = " +
                                              std::to_string(config.N * config.T));
  }
  if (config.N % stride != 0) {
    throw Error(ErrorKind::MalformedInput, "recording stride " + std::to_string(stride) + " does not divide N = " +
                                               std::to_string(config.N));
  }
  const long step = config.N / stride;
  AggregatedSamples samples;
  samples.z.reserve(config.T);
  for (long t = 0; t < config.T; ++t) samples.z.push_back(trace.y[(t + 1) * step] - trace.y[t * step]);
  return samples;
}

Eigen::VectorXd LinearHull::residual(const Eigen::VectorXd& v) const {
  if (v.size() != dimension_) {
    throw Error(ErrorKind::DimensionMismatch,
                "vector of length " + std::to_string(v.size()) + " against hull in R^" + std::to_string(dimension_));
  }
  Eigen::VectorXd r = v;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis_) r -= b.dot(r) * b;
  }
  return r;
}

double LinearHull::distance(const Eigen::VectorXd& v) const { return residual(v).norm(); }

double LinearHull::add(const Eigen::VectorXd& v) {
  Eigen::VectorXd r = residual(v);
  const double pivot = r.norm();
  if (!(pivot > 0.0)) throw Error(ErrorKind::DimensionMismatch, "vector already lies in the hull");
  basis_.push_back(r / pivot);
  return pivot;
}

double distance_to_hull(const Eigen::VectorXd& v, const LinearHull& hull) { return hull.distance(v); }

GenusEstimate genus_estimate(const AggregatedSamples& samples, const EstimateConfig& config,
                             std::uint64_t selection_seed) {
  validate(config);
  GenusEstimate result;
  Rng rng(selection_seed);
  LinearHull hull(samples.dimension());
  const long count = static_cast<long>(samples.z.size());

  while (true) {
    std::vector<long> far;
    for (long t = 0; t < count; ++t) {
      if (hull.distance(samples.z[t]) > config.epsilon) far.push_back(t);
    }
    result.hull_far_count.push_back(static_cast<long>(far.size()));
    result.k = hull.size();
    if (static_cast<long>(far.size()) < config.T_prime) break;
    if (result.k + 1 > 2 * config.g_bar) {
      result.failure_reason = "hull dimension would exceed 2 g_bar = " + std::to_string(2 * config.g_bar);
      return result;
    }
    const long t = far[rng.uniform_index(far.size())];
    result.selected.push_back(t);
    result.pivot_norms.push_back(hull.add(samples.z[t]));
  }

  if (result.k % 2 != 0) {
    if (config.mode == EstimateMode::PaperFaithful) {
      result.failure_reason = "odd hull dimension k = " + std::to_string(result.k);
      return result;
    }
    result.warning = "odd hull dimension k = " + std::to_string(result.k) + ", reporting floor(k/2)";
  }
  result.success = true;
  result.genus = result.k / 2;
  return result;
}

ErrorBudget paper_error_budget(double p, double mu, double delta, int g0, long N, std::optional<double> lag) {
  if (!(p > 0 && mu > 0 && delta > 0 && g0 >= 0 && N >= 1)) {
    throw Error(ErrorKind::MalformedInput, "error budget needs positive p, mu, delta and N");
  }
  ErrorBudget b;
  const double log_inv_delta = std::log(1.0 / delta);
  b.recommended_lag = 2.0 / mu * log_inv_delta;
  const double a = lag.value_or(b.recommended_lag);
  b.error_probability_bound = 10.0 * p / mu * log_inv_delta;
  b.old_error_bound = 5.0 * p / mu * std::pow(1.0 - mu, a);
  b.new_error_probability = 1.0 - std::pow(1.0 - p, a);
  b.new_error_bound = a * p;
  b.selection_union_bound = g0 * b.error_probability_bound;
  b.single_excitation_probability =
      std::max(0.0, static_cast<double>(N) - a) * p * std::pow(1.0 - p, static_cast<double>(N - 1));
  return b;
}

AggregatedSamples synthetic_samples(int m0, int d, long T, double noise, std::uint64_t seed) {
  if (d < 0 || d > m0) throw Error(ErrorKind::MalformedInput, "subspace dimension must lie in [0, m0]");
  Rng rng(seed);
  Eigen::MatrixXd gaussian(m0, std::max(d, 1));
  for (Eigen::Index i = 0; i < gaussian.size(); ++i) gaussian.data()[i] = rng.normal();
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian).householderQ() *
                            Eigen::MatrixXd::Identity(m0, std::max(d, 1));

  AggregatedSamples samples;
  samples.z.reserve(T);
  for (long t = 0; t < T; ++t) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(m0);
    if (d > 0) {
      const double magnitude = 1.0 + rng.uniform01();
      z = (rng.uniform01() < 0.5 ? -magnitude : magnitude) * q.col(static_cast<Eigen::Index>(t % d));
    }
    Eigen::VectorXd direction(m0);
    for (int i = 0; i < m0; ++i) direction[i] = rng.normal();
    z += (noise * rng.uniform01()) * direction.normalized();
    samples.z.push_back(std::move(z));
  }
  return samples;
}

}  // namespace genus
