#include "rbd/random.hpp"

#include <cmath>
#include <numbers>

namespace rbd {

std::pair<double, double> CounterRng::normal_pair() noexcept {
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

Complex CounterRng::complex_normal(double variance) noexcept {
  const auto [a, b] = normal_pair();
  const double s = std::sqrt(0.5 * variance);
  return {s * a, s * b};
}

void fill_complex_normal(std::span<Complex> out, CounterRng& rng, double variance) noexcept {
  for (auto& z : out) z = rng.complex_normal(variance);
}

}  // namespace rbd
