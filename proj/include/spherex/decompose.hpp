#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "spherex/poly.hpp"

namespace spherex {

/// Degree-(d1, d2) folded polynomial: sum_beta h_beta(x) x^beta with |beta| = d1
/// and every fold h_beta homogeneous of degree d2.
template <class T>
struct FoldedPoly {
  std::size_t n = 1;
  int d1 = 0;
  int d2 = 0;
  std::map<MultiIndex, BasicPoly<T>> folds;

  FoldedPoly() = default;
  FoldedPoly(std::size_t n_, int d1_, int d2_) : n(n_), d1(d1_), d2(d2_) {
    if (d1 < 0 || d2 < 0) throw InvalidArgument("folded polynomial degrees must be non-negative");
  }

  /// Adds p to the fold at beta, dropping folds that cancel to zero.
  void add_fold(const MultiIndex& beta, const BasicPoly<T>& p) {
    if (beta.size() != n || beta.degree() != d1) throw InvalidArgument("fold key " + beta.to_string() + " has wrong shape");
    if (p.n() != n || p.degree() != d2) throw InvalidArgument("fold at " + beta.to_string() + " has wrong shape");
    if (p.is_zero()) return;
    auto [it, inserted] = folds.emplace(beta, p);
    if (!inserted) {
      it->second = it->second + p;
      if (it->second.is_zero()) folds.erase(it);
    }
  }

  const BasicPoly<T>* fold(const MultiIndex& beta) const {
    auto it = folds.find(beta);
    return it == folds.end() ? nullptr : &it->second;
  }

  /// The degree-d2 polynomial x -> sum_beta y^beta h_beta(x), with
  /// coefficients in y's scalar type.
  template <class V>
  BasicPoly<typename V::Scalar> at(const V& y) const {
    using S = typename V::Scalar;
    BasicPoly<S> out(n, d2);
    for (const auto& [beta, p] : folds) {
      const S weight = BasicPoly<S>::monomial(beta, S(1))(y);
      for (const auto& [gamma, c] : p.terms()) out.add_term(gamma, weight * scalar_cast<S>(c));
    }
    return out;
  }
};

/// f = sum_alpha x^{2 alpha} G_{2 alpha}(x), each G_{2 alpha} multilinear of
/// degree d - 2|alpha|.
template <class T>
using MultilinearParts = std::map<MultiIndex, BasicPoly<T>>;

template <class T>
MultilinearParts<T> multilinear_parts(const BasicPoly<T>& f) {
  MultilinearParts<T> out;
  const std::size_t n = f.n();
  for (const auto& [beta, c] : f.terms()) {
    std::vector<int> half(n), odd(n);
    for (std::size_t i = 0; i < n; ++i) {
      half[i] = beta[i] / 2;
      odd[i] = beta[i] % 2;
    }
    const MultiIndex alpha(half);
    auto it = out.find(alpha);
    if (it == out.end()) it = out.emplace(alpha, BasicPoly<T>(n, f.degree() - 2 * alpha.degree())).first;
    it->second.add_term(MultiIndex(odd), c);
  }
  return out;
}

/// sum_alpha x^{2 alpha} G_{2 alpha}(x).
template <class T, class V>
typename V::Scalar eval_parts(const MultilinearParts<T>& parts, const V& x) {
  using S = typename V::Scalar;
  S total(0);
  for (const auto& [alpha, g] : parts) total += BasicPoly<S>::monomial(alpha.scaled(2), S(1))(x) * g(x);
  return total;
}

/// k-collapse: g_gamma = sum_{|alpha| = k} f_{gamma + alpha}.
template <class T>
BasicPoly<T> collapse(const BasicPoly<T>& f, int k) {
  if (k < 0 || k > f.degree()) throw InvalidArgument("collapse: k = " + std::to_string(k) + " outside [0, " + std::to_string(f.degree()) + "]");
  BasicPoly<T> out(f.n(), f.degree() - k);
  for (const auto& [beta, c] : f.terms()) {
    for_each_sub_index(beta, k, [&](const MultiIndex& alpha) { out.add_term(beta - alpha, c); });
  }
  return out;
}

/// k-collapse of a folded polynomial; folds landing on the same monomial add.
template <class T>
FoldedPoly<T> collapse(const FoldedPoly<T>& h, int k) {
  if (k < 0 || k > h.d1) throw InvalidArgument("collapse: k = " + std::to_string(k) + " outside [0, " + std::to_string(h.d1) + "]");
  FoldedPoly<T> out(h.n, h.d1 - k, h.d2);
  for (const auto& [beta, p] : h.folds) {
    for_each_sub_index(beta, k, [&](const MultiIndex& alpha) { out.add_fold(beta - alpha, p); });
  }
  return out;
}

enum class FoldScaling { unfold_exact, paper_scaled };

/// (d-2, 2)-folded polynomial whose folds are the quadratic forms of the n x n
/// blocks M_f[(I,.),(J,.)] of the SoS-symmetric matrix, (I, J) the
/// lexicographically smallest pair with alpha(I) + alpha(J) = beta. The block
/// entries are f_{beta+e_i+e_j} / |orbit(beta+e_i+e_j)| so M_f is never formed.
/// unfold_exact multiplies by |orbit(beta)|, paper_scaled divides by it.
template <class T>
FoldedPoly<T> fold_quadratic(const BasicPoly<T>& f, FoldScaling scaling = FoldScaling::unfold_exact) {
  const int d = f.degree();
  if (d < 4 || d % 2 != 0) throw InvalidArgument("fold_quadratic: degree must be even and >= 4, got " + std::to_string(d));
  const std::size_t n = f.n();
  FoldedPoly<T> out(n, d - 2, 2);
  // Only beta below some monomial of f can have a nonzero block.
  std::map<MultiIndex, BasicPoly<T>> blocks;
  for (const auto& [alpha, c] : f.terms()) {
    for_each_sub_index(alpha, 2, [&](const MultiIndex& gamma) {
      const MultiIndex beta = alpha - gamma;
      if (blocks.count(beta) != 0) return;
      BasicPoly<T> q(n, 2);
      const T orbit_beta(orbit_size(beta));
      const T scale = scaling == FoldScaling::unfold_exact ? orbit_beta : T(1) / orbit_beta;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
          const MultiIndex quad = MultiIndex::unit(n, i) + MultiIndex::unit(n, j);
          const MultiIndex full = beta + quad;
          const T entry = f.coeff(full) / T(orbit_size(full));
          // x^T B x collects B_ij + B_ji on x_i x_j.
          q.add_term(quad, (i == j ? entry : T(2) * entry) * scale);
        }
      }
      blocks.emplace(beta, std::move(q));
    });
  }
  for (const auto& [beta, q] : blocks) out.add_fold(beta, q);
  return out;
}

/// (d - d2, d2)-folded polynomial with unfold(h) = f for any degree, splitting
/// every monomial alpha = beta + gamma with weight
/// |orbit(beta)| |orbit(gamma)| / |orbit(alpha)|. For even d and d2 = 2 this
/// coincides with fold_quadratic(f, unfold_exact).
template <class T>
FoldedPoly<T> fold_split(const BasicPoly<T>& f, int d2) {
  if (d2 < 0 || d2 > f.degree()) throw InvalidArgument("fold_split: fold degree out of range");
  FoldedPoly<T> out(f.n(), f.degree() - d2, d2);
  for (const auto& [alpha, c] : f.terms()) {
    const T orbit_alpha(orbit_size(alpha));
    for_each_sub_index(alpha, d2, [&](const MultiIndex& gamma) {
      const MultiIndex beta = alpha - gamma;
      const T w = T(orbit_size(beta)) * T(orbit_size(gamma)) / orbit_alpha;
      out.add_fold(beta, BasicPoly<T>::monomial(gamma, c * w));
    });
  }
  return out;
}

/// sum_beta h_beta(x) x^beta.
template <class T>
BasicPoly<T> unfold(const FoldedPoly<T>& h) {
  BasicPoly<T> out(h.n, h.d1 + h.d2);
  for (const auto& [beta, p] : h.folds) {
    for (const auto& [gamma, c] : p.terms()) out.add_term(beta + gamma, c);
  }
  return out;
}

/// h^r with folds multiplied as coefficients.
template <class T>
FoldedPoly<T> folded_power(const FoldedPoly<T>& h, int r, const Limits& limits = Limits::defaults()) {
  if (r < 1) throw InvalidArgument("folded_power: exponent must be >= 1");
  FoldedPoly<T> out = h;
  for (int step = 1; step < r; ++step) {
    FoldedPoly<T> next(h.n, out.d1 + h.d1, out.d2 + h.d2);
    std::size_t total_terms = 0;
    for (const auto& [b1, p1] : out.folds) {
      for (const auto& [b2, p2] : h.folds) {
        const BasicPoly<T> prod = p1.multiply(p2, limits);
        total_terms += prod.size();
        check_capacity(total_terms, limits.max_terms, "folded power terms");
        next.add_fold(b1 + b2, prod);
      }
    }
    out = std::move(next);
  }
  return out;
}

/// S_{2 alpha} with folds (S_{2 alpha})_gamma = h_{2 alpha + gamma}, gamma
/// multilinear, so that h = sum_alpha x^{2 alpha} S_{2 alpha}.
template <class T>
std::map<MultiIndex, FoldedPoly<T>> folded_multilinear_parts(const FoldedPoly<T>& h) {
  std::map<MultiIndex, FoldedPoly<T>> out;
  for (const auto& [beta, p] : h.folds) {
    std::vector<int> half(h.n), odd(h.n);
    for (std::size_t i = 0; i < h.n; ++i) {
      half[i] = beta[i] / 2;
      odd[i] = beta[i] % 2;
    }
    const MultiIndex alpha(half);
    auto it = out.find(alpha);
    if (it == out.end()) it = out.emplace(alpha, FoldedPoly<T>(h.n, h.d1 - 2 * alpha.degree(), h.d2)).first;
    it->second.add_fold(MultiIndex(odd), p);
  }
  return out;
}

/// Pointwise value of the unfolding, sum_beta x^beta h_beta(x).
template <class T, class V>
typename V::Scalar eval_folded(const FoldedPoly<T>& h, const V& x) {
  using S = typename V::Scalar;
  S total(0);
  for (const auto& [beta, p] : h.folds) total += BasicPoly<S>::monomial(beta, S(1))(x) * p(x);
  return total;
}

}  // namespace spherex
