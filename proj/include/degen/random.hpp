#pragma once

#include "degen/types.hpp"

#include <cstdint>
#include <random>

namespace degen {

using Rng = std::mt19937_64;

/// Complex vector with independent standard normal real and imaginary parts.
inline Vector random_vector(int dim, Rng& rng, bool real_only = false) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = nd(rng);
    const double im = real_only ? 0.0 : nd(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

}  // namespace degen
