#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "genus/simulator.hpp"

namespace genus {

enum class EstimateMode {
  /// T' = 6(n_bar + g_bar), epsilon = n_bar^(-m0 n_bar), T = 4 T'^2.
  PaperFaithful,
  /// Caller-chosen epsilon, T' and T.
  Practical,
};

struct EstimateConfig {
  long n_bar = 0;  // >= n + m + f
  int g_bar = 0;   // >= g
  int m0 = 0;
  double p = 0.0;
  long N = 1;        // aggregation length round(1/p)
  long T_prime = 1;  // stop threshold on |H(k)|
  long T = 1;        // number of aggregated samples
  double epsilon = 0.0;
  /// Natural log of epsilon; kept because the paper-faithful value underflows.
  double log_epsilon = 0.0;
  bool epsilon_underflow = false;
  EstimateMode mode = EstimateMode::Practical;

  /// Constants exactly as prescribed by the algorithm. When epsilon
  /// underflows a double it is clamped to the smallest subnormal and
  /// `epsilon_underflow` is set.
  static EstimateConfig paper_faithful(long n_bar, int g_bar, int m0, double p);
  static EstimateConfig practical(long n_bar, int g_bar, int m0, double p, double epsilon = kPracticalEpsilon,
                                  long T_prime = kPracticalTPrime, long T = kPracticalT);

  static constexpr double kPracticalEpsilon = 1e-6;
  static constexpr long kPracticalTPrime = 20;
  static constexpr long kPracticalT = 200;

  /// Steps of process needed: N * T.
  long required_steps() const { return N * T; }
};

/// Throws Error{MalformedInput} unless N >= 1, T >= T' >= 1 and epsilon > 0.
void validate(const EstimateConfig& config);

/// round(1/p), at least 1.
long aggregation_length(double p);

/// Practical-mode excitation probability: (target / 10) * mu / ln(4 / epsilon),
/// i.e. the p at which the error budget 10 p / mu ln(1/delta) at
/// delta = epsilon / 4 equals `target`.
inline constexpr double kPracticalErrorTarget = 0.1;
double practical_excitation_probability(double mu, double epsilon, double target = kPracticalErrorTarget);

/// z(t) = y(N(t+1)) - y(Nt) for t = 0..T-1.
struct AggregatedSamples {
  std::vector<Eigen::VectorXd> z;
  int dimension() const { return z.empty() ? 0 : static_cast<int>(z.front().size()); }
};

/// Requires observations at times 0, N, 2N, ..., NT. Throws
/// Error{TraceTooShort} otherwise.
AggregatedSamples aggregate(const ObservationTrace& trace, const EstimateConfig& config);

/// Orthonormal basis of span{z(t_1), ..., z(t_k)}.
class LinearHull {
 public:
  explicit LinearHull(int dimension) : dimension_(dimension) {}

  int dimension() const { return dimension_; }
  int size() const { return static_cast<int>(basis_.size()); }
  const std::vector<Eigen::VectorXd>& basis() const { return basis_; }

  /// Euclidean distance from v to the span. Throws Error{DimensionMismatch}.
  double distance(const Eigen::VectorXd& v) const;
  /// Adds v and returns its Gram-Schmidt pivot norm (the distance before
  /// insertion). Vectors at distance 0 are rejected with DimensionMismatch.
  double add(const Eigen::VectorXd& v);

 private:
  Eigen::VectorXd residual(const Eigen::VectorXd& v) const;

  int dimension_;
  std::vector<Eigen::VectorXd> basis_;
};

double distance_to_hull(const Eigen::VectorXd& v, const LinearHull& hull);

struct GenusEstimate {
  bool success = false;
  int genus = -1;
  int k = 0;
  std::vector<long> selected;       // t_1, t_2, ...
  std::vector<long> hull_far_count; // |H(0)|, |H(1)|, ...
  std::vector<double> pivot_norms;  // Gram-Schmidt pivot norms of the selections
  std::string failure_reason;
  std::string warning;
};

/// The genus estimate: grow the hull by uniformly chosen far samples until
/// fewer than T' samples lie farther than epsilon, then answer k/2.
/// Selections draw from Rng(selection_seed). Pure in (samples, config, seed).
GenusEstimate genus_estimate(const AggregatedSamples& samples, const EstimateConfig& config,
                             std::uint64_t selection_seed);

struct ErrorBudget {
  double error_probability_bound;  // 10 p / mu ln(1/delta)
  double old_error_bound;          // 5 p / mu (1 - mu)^a
  double new_error_probability;    // 1 - (1 - p)^a
  double new_error_bound;          // a p
  double recommended_lag;          // 2 / mu ln(1/delta)
  double selection_union_bound;    // g0 * error_probability_bound
  double single_excitation_probability;  // (N - a) p (1 - p)^(N - 1)
};

/// Analytic error bounds of the process at excitation rate p and spectral
/// gap mu. If `lag` is absent the recommended lag is used.
ErrorBudget paper_error_budget(double p, double mu, double delta, int g0, long N,
                               std::optional<double> lag = std::nullopt);

/// T samples in R^m0 from a random d-dimensional subspace with orthonormal
/// basis q_0..q_{d-1}: sample t is s * q_{t mod d} with a random sign and
/// |s| uniform in [1, 2], plus a perturbation of norm strictly below `noise`
/// in a uniformly random direction. Every direction gets at least T / d
/// samples, and a sample lies within (1 + 2) * noise of the span of any
/// selection that covers its direction.
AggregatedSamples synthetic_samples(int m0, int d, long T, double noise, std::uint64_t seed);

}  // namespace genus
