#include <cmath>

#include "doctest.h"

#include "genus/rng.hpp"

using namespace genus;

TEST_CASE("seed derivation separates streams and indices") {
  CHECK(derive_seed(1, Stream::Process) != derive_seed(1, Stream::Selection));
  CHECK(derive_seed(1, Stream::Process, 0) != derive_seed(1, Stream::Process, 1));
  CHECK(derive_seed(1, Stream::Process) != derive_seed(2, Stream::Process));
  static_assert(derive_seed(5, Stream::Synthetic, 3) == derive_seed(5, Stream::Synthetic, 3));
}

TEST_CASE("draws are reproducible and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto k = a.uniform_index(7);
    CHECK(k == b.uniform_index(7));
    CHECK(k < 7);
    const double u = a.uniform01();
    CHECK(u == b.uniform01());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(Rng(1).uniform_index(1) == 0);
}

TEST_CASE("distribution moments") {
  Rng rng(3);
  const int n = 200000;
  double sum = 0, sq = 0, exp_sum = 0;
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
    exp_sum += rng.exponential(2.0);
    ones += rng.bernoulli(0.25);
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sq / n - 1) < 0.02);
  CHECK(std::abs(exp_sum / n - 0.5) < 0.01);
  CHECK(std::abs(ones / static_cast<double>(n) - 0.25) < 0.01);
}
