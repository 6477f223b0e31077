#pragma once

#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "spherex/decompose.hpp"
#include "spherex/oracle.hpp"
#include "spherex/rounding.hpp"

namespace spherex::suites {

// Published seeds. Polynomial i of a suite is random_poly drawn from
// mt19937_64(base + i).
inline constexpr std::uint64_t kNncSeedBase = 1;
inline constexpr std::uint64_t kGeneralSeedBase = 1001;
inline constexpr std::uint64_t kWeakSeedBase = 2001;
inline constexpr int kSuiteSize = 50;

inline constexpr std::size_t kRatioN = 5;
inline constexpr std::size_t kWeakN = 4;
inline constexpr int kDegree = 4;
inline constexpr int kOracleRestarts = 200;

struct RatioCase {
  std::string kind;  // "nnc" or "general"
  int q = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  double upper = 0.0;
  double ratio = 0.0;  // upper / value, upper already at the d/q root
};

inline HomogPoly suite_poly(CoeffKind kind, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_poly(n, kDegree, rng, kind);
}

/// 50 nnc and 50 general quartics in 5 variables, each optimized at q = 4
/// and q = 8 with the matching method.
inline std::vector<RatioCase> ratio_suite() {
  std::vector<RatioCase> out;
  for (const auto& [kind, base, method] : {std::tuple{std::string("nnc"), kNncSeedBase, Method::nnc},
                                           std::tuple{std::string("general"), kGeneralSeedBase, Method::general}}) {
    const CoeffKind coeffs = kind == "nnc" ? CoeffKind::nonnegative : CoeffKind::general;
    for (int i = 0; i < kSuiteSize; ++i) {
      const std::uint64_t seed = base + static_cast<std::uint64_t>(i);
      const HomogPoly f = suite_poly(coeffs, kRatioN, seed);
      for (int q : {4, 8}) {
        const OptReport r = optimize(f, q, method);
        RatioCase c{kind, q, seed, r.value, r.upper ? r.upper->value : 0.0, r.ratio.value_or(INFINITY)};
        out.push_back(c);
      }
    }
  }
  return out;
}

struct WeakCase {
  std::uint64_t seed = 0;
  MultiIndex alpha;
  double norm_f = 0.0;
  double scaled_part = 0.0;  // y^{2 alpha} ||G_{2 alpha}||_2
  double ratio = 0.0;        // scaled_part / norm_f
};

/// y^{2 alpha} = prod (alpha_i / |alpha|)^{alpha_i}, 1 for alpha = 0.
inline double y_weight(const MultiIndex& alpha) {
  const int t = alpha.degree();
  double w = 1.0;
  for (int a : alpha.exponents()) {
    if (a > 0) w *= std::pow(static_cast<double>(a) / t, a);
  }
  return w;
}

inline double oracle_norm(const HomogPoly& g) {
  if (g.degree() == 0) return g.is_zero() ? 0.0 : std::abs(g.terms().begin()->second);
  return brute_norm2(g, kOracleRestarts).value;
}

/// 50 general quartics in 4 variables; one case per multilinear part.
inline std::vector<WeakCase> weak_suite() {
  std::vector<WeakCase> out;
  for (int i = 0; i < kSuiteSize; ++i) {
    const std::uint64_t seed = kWeakSeedBase + static_cast<std::uint64_t>(i);
    const HomogPoly f = suite_poly(CoeffKind::general, kWeakN, seed);
    const double norm_f = oracle_norm(f);
    for (const auto& [alpha, g] : multilinear_parts(f)) {
      WeakCase c{seed, alpha, norm_f, y_weight(alpha) * oracle_norm(g), 0.0};
      c.ratio = c.scaled_part / norm_f;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace spherex::suites
