#include "spherex/oracle.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace spherex {

namespace {

double value_and_grad(const HomogPoly& f, const VecD& x, VecD* g) {
  const std::size_t n = f.n();
  const int d = f.degree();
  std::vector<std::vector<double>> powers(n, std::vector<double>(static_cast<std::size_t>(d) + 1, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (int e = 1; e <= d; ++e) powers[i][static_cast<std::size_t>(e)] = powers[i][static_cast<std::size_t>(e) - 1] * x(static_cast<Eigen::Index>(i));
  }
  if (g != nullptr) g->setZero(static_cast<Eigen::Index>(n));
  double value = 0.0;
  for (const auto& [alpha, c] : f.terms()) {
    double term = c;
    for (std::size_t i = 0; i < n; ++i) term *= powers[i][static_cast<std::size_t>(alpha[i])];
    value += term;
    if (g == nullptr) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const int e = alpha[i];
      if (e == 0) continue;
      // d/dx_i: replace x_i^e by e x_i^{e-1}.
      double partial = c * e;
      for (std::size_t j = 0; j < n; ++j) partial *= powers[j][static_cast<std::size_t>(j == i ? e - 1 : alpha[j])];
      (*g)(static_cast<Eigen::Index>(i)) += partial;
    }
  }
  return value;
}

struct Ascent {
  double value;
  VecD x;
  bool converged;
};

// Maximize sign * f over the sphere from x.
Ascent ascend(const HomogPoly& f, double sign, VecD x, int iters, double tol) {
  constexpr double armijo = 1e-4;
  VecD g;
  double value = sign * value_and_grad(f, x, &g);
  double step = 0.5;
  for (int it = 0; it < iters; ++it) {
    g *= sign;
    VecD tangent = g - g.dot(x) * x;
    const double tnorm = tangent.norm();
    if (tnorm <= tol) return {value, x, true};
    const VecD dir = tangent / tnorm;
    auto trial = [&](double t, VecD* out_x, double* out_v) {
      *out_x = (x + t * dir).normalized();
      *out_v = sign * value_and_grad(f, *out_x, nullptr);
      return *out_v > value && *out_v >= value + armijo * t * tnorm;
    };
    VecD cand;
    double cand_v = 0.0;
    if (trial(step, &cand, &cand_v)) {
      // Grow while the larger step still satisfies the condition and helps.
      while (step < 1.0) {
        VecD bigger;
        double bigger_v = 0.0;
        if (!trial(std::min(1.0, 2.0 * step), &bigger, &bigger_v) || bigger_v <= cand_v) break;
        step = std::min(1.0, 2.0 * step);
        cand = std::move(bigger);
        cand_v = bigger_v;
      }
    } else {
      bool ok = false;
      while (step > 1e-18) {
        step *= 0.5;
        if (trial(step, &cand, &cand_v)) {
          ok = true;
          break;
        }
      }
      // No step gives a representable increase: converged to rounding level.
      if (!ok) return {value, x, true};
    }
    x = std::move(cand);
    value = sign * value_and_grad(f, x, &g);
  }
  g *= sign;
  const bool converged = (g - g.dot(x) * x).norm() <= tol;
  return {value, x, converged};
}

}  // namespace

VecD grad(const HomogPoly& f, const VecD& x) {
  if (static_cast<std::size_t>(x.size()) != f.n()) throw InvalidArgument("grad: dimension mismatch");
  VecD g;
  value_and_grad(f, x, &g);
  return g;
}

Norm2Estimate brute_norm2(const HomogPoly& f, int restarts, int iters, double tol, std::uint64_t seed) {
  if (restarts < 1) throw InvalidArgument("brute_norm2: restarts must be >= 1");
  if (iters < 1) throw InvalidArgument("brute_norm2: iters must be >= 1");
  const std::size_t n = f.n();
  const auto dim = static_cast<Eigen::Index>(n);
  Norm2Estimate out;
  out.restarts = restarts;
  out.seed = seed;
  out.argmax = VecD::Unit(dim, 0);
  if (f.is_zero()) {
    out.exact = true;
    return out;
  }
  if (f.degree() == 1) {
    VecD c = VecD::Zero(dim);
    for (const auto& [alpha, v] : f.terms()) c(static_cast<Eigen::Index>(alpha.support().front())) = v;
    out.value = c.norm();
    out.argmax = c / c.norm();
    out.exact = true;
    return out;
  }
  if (f.degree() == 2) {
    MatD q = MatD::Zero(dim, dim);
    for (const auto& [alpha, v] : f.terms()) {
      const auto s = alpha.support();
      if (s.size() == 1) {
        q(static_cast<Eigen::Index>(s[0]), static_cast<Eigen::Index>(s[0])) = v;
      } else {
        q(static_cast<Eigen::Index>(s[0]), static_cast<Eigen::Index>(s[1])) = v / 2;
        q(static_cast<Eigen::Index>(s[1]), static_cast<Eigen::Index>(s[0])) = v / 2;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(q)};
    const double top = es.eigenvalues()(dim - 1);
    const double bottom = es.eigenvalues()(0);
    const bool use_top = std::abs(top) >= std::abs(bottom);
    out.value = use_top ? std::abs(top) : std::abs(bottom);
    out.argmax = es.eigenvectors().col(use_top ? dim - 1 : 0);
    out.exact = true;
    return out;
  }
  double coeff_norm = 0.0;
  for (const auto& [alpha, v] : f.terms()) coeff_norm += v * v;
  const double tangent_tol = tol * std::sqrt(coeff_norm);
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    const VecD start = random_unit(n, rng);
    for (double sign : {1.0, -1.0}) {
      const Ascent a = ascend(f, sign, start, iters, tangent_tol);
      if (!a.converged) ++out.unconverged;
      if (!have || a.value > out.value) {
        out.value = a.value;
        out.argmax = a.x;
        have = true;
      }
    }
  }
  out.value = std::abs(f(out.argmax));
  return out;
}

double sample_max(const HomogPoly& f, int samples, std::mt19937_64& rng) {
  double best = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) best = std::max(best, f(random_unit(f.n(), rng)));
  return best;
}

}  // namespace spherex
