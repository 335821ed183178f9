#include "genus/rng.hpp"

#include <cmath>
#include <numbers>

namespace genus {

double Rng::exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

double Rng::normal() {
  double u = uniform01();
  while (u <= 0.0) u = uniform01();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * uniform01());
}

}  // namespace genus
