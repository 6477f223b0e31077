#include "spherex/poly.hpp"

namespace spherex {

HomogPoly random_poly(std::size_t n, int d, std::mt19937_64& rng, CoeffKind kind, double density) {
  HomogPoly out(n, d);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto support = kind == CoeffKind::multilinear ? multilinear_indices(n, d) : multi_indices(n, d);
  for (const auto& alpha : support) {
    if (density < 1.0 && unit(rng) >= density) continue;
    out.add_term(alpha, kind == CoeffKind::nonnegative ? unit(rng) : normal(rng));
  }
  return out;
}

RationalPoly random_rational_poly(std::size_t n, int d, std::mt19937_64& rng, int range) {
  RationalPoly out(n, d);
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> den(1, 3);
  for (const auto& alpha : multi_indices(n, d)) {
    out.add_term(alpha, Rational(num(rng)) / Rational(den(rng)));
  }
  return out;
}

VecD random_unit(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VecD x(static_cast<Eigen::Index>(n));
  do {
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
  } while (x.norm() == 0.0);
  return x / x.norm();
}

}  // namespace spherex
