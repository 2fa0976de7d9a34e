#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "galmon/linalg.hpp"

namespace galmon {

/// Every random draw in the library goes through an explicitly seeded engine.
using Rng = std::mt19937_64;

inline double random_gaussian(Rng& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  return d(rng);
}

/// Real and imaginary parts i.i.d. standard normal.
inline Complex random_complex_gaussian(Rng& rng) {
  const double re = random_gaussian(rng);
  const double im = random_gaussian(rng);
  return {re, im};
}

/// Uniform phase on the unit circle.
inline Complex random_unit_complex(Rng& rng) {
  std::uniform_real_distribution<double> d(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, d(rng));
}

inline CVector random_complex_vector(Rng& rng, std::size_t n) {
  CVector v(n);
  for (auto& c : v) c = random_complex_gaussian(rng);
  return v;
}

inline CVector random_real_vector(Rng& rng, std::size_t n) {
  CVector v(n);
  for (auto& c : v) c = random_gaussian(rng);
  return v;
}

}  // namespace galmon
