#pragma once

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "spherex/poly.hpp"

namespace th {

using spherex::HomogPoly;
using spherex::MultiIndex;
using spherex::VecD;

/// Polynomial from (exponents, coeff) pairs; n and d inferred from the first.
inline HomogPoly poly(std::vector<std::pair<std::vector<int>, double>> terms) {
  const MultiIndex first(terms.front().first);
  HomogPoly f(first.size(), first.degree());
  for (auto& [e, c] : terms) f.add_term(MultiIndex(e), c);
  return f;
}

inline HomogPoly x1x2x3x4() { return poly({{{1, 1, 1, 1}, 1.0}}); }

inline VecD vec(std::initializer_list<double> v) {
  VecD out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace th
