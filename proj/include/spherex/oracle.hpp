#pragma once

#include <cstdint>

#include "spherex/poly.hpp"

namespace spherex {

/// Gradient by term-wise differentiation.
VecD grad(const HomogPoly& f, const VecD& x);

struct Norm2Estimate {
  double value = 0.0;
  VecD argmax;
  int restarts = 0;
  /// Ascents (one per restart and sign) that used up the iteration budget
  /// before the tangent gradient fell below tolerance.
  int unconverged = 0;
  std::uint64_t seed = 0;
  bool exact = false;
};

/// Estimate of sup_{|x|=1} |f(x)|: projected gradient ascent of f and of -f
/// from seeded random starts. Restart i draws from a generator seeded by
/// (seed, i) so larger restart counts extend smaller ones. Degrees 1 and 2 are
/// solved exactly.
Norm2Estimate brute_norm2(const HomogPoly& f, int restarts = 200, int iters = 2000, double tol = 1e-10,
                          std::uint64_t seed = 0);

/// max of f(x) over `samples` random unit vectors.
double sample_max(const HomogPoly& f, int samples, std::mt19937_64& rng);

}  // namespace spherex
