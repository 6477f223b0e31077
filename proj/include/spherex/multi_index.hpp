#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "spherex/errors.hpp"

namespace spherex {

/// Exponent vector alpha in N^n. Indexes monomials x^alpha, tuple orbits and
/// folds. Ordered lexicographically on the exponents so it can key std::map.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : exps_(n, 0) {}
  MultiIndex(std::initializer_list<int> exps) : MultiIndex(std::vector<int>(exps)) {}
  explicit MultiIndex(std::vector<int> exps) : exps_(std::move(exps)) {
    for (int e : exps_) {
      if (e < 0) throw InvalidArgument("multi-index entries must be non-negative");
      degree_ += e;
    }
  }

  static MultiIndex unit(std::size_t n, std::size_t i) {
    MultiIndex out(n);
    out.exps_.at(i) = 1;
    out.degree_ = 1;
    return out;
  }

  /// alpha(I): entry j counts the occurrences of j in the tuple.
  static MultiIndex from_tuple(std::size_t n, std::span<const int> tuple) {
    MultiIndex out(n);
    for (int i : tuple) {
      if (i < 0 || static_cast<std::size_t>(i) >= n) throw InvalidArgument("tuple entry out of range");
      ++out.exps_[static_cast<std::size_t>(i)];
    }
    out.degree_ = static_cast<int>(tuple.size());
    return out;
  }

  std::size_t size() const { return exps_.size(); }
  int degree() const { return degree_; }
  int operator[](std::size_t i) const { return exps_[i]; }
  std::span<const int> exponents() const { return exps_; }

  bool is_multilinear() const {
    return std::all_of(exps_.begin(), exps_.end(), [](int e) { return e <= 1; });
  }

  /// Componentwise alpha <= other.
  bool leq(const MultiIndex& other) const {
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (exps_[i] > other.exps_[i]) return false;
    }
    return true;
  }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (exps_[i] != 0) out.push_back(i);
    }
    return out;
  }

  /// The non-decreasing tuple I with alpha(I) = alpha; the lexicographically
  /// smallest member of the orbit.
  std::vector<int> sorted_tuple() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(degree_));
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      out.insert(out.end(), static_cast<std::size_t>(exps_[i]), static_cast<int>(i));
    }
    return out;
  }

  MultiIndex operator+(const MultiIndex& o) const {
    check_same_size(o);
    MultiIndex out = *this;
    for (std::size_t i = 0; i < exps_.size(); ++i) out.exps_[i] += o.exps_[i];
    out.degree_ += o.degree_;
    return out;
  }

  MultiIndex operator-(const MultiIndex& o) const {
    check_same_size(o);
    if (!o.leq(*this)) throw InvalidArgument("multi-index subtraction would go negative");
    MultiIndex out = *this;
    for (std::size_t i = 0; i < exps_.size(); ++i) out.exps_[i] -= o.exps_[i];
    out.degree_ -= o.degree_;
    return out;
  }

  /// Entrywise multiple r * alpha.
  MultiIndex scaled(int r) const {
    MultiIndex out = *this;
    for (int& e : out.exps_) e *= r;
    out.degree_ *= r;
    return out;
  }

  bool operator==(const MultiIndex& o) const { return exps_ == o.exps_; }
  std::strong_ordering operator<=>(const MultiIndex& o) const { return exps_ <=> o.exps_; }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (i != 0) s += ",";
      s += std::to_string(exps_[i]);
    }
    return s + ")";
  }

 private:
  void check_same_size(const MultiIndex& o) const {
    if (o.exps_.size() != exps_.size()) throw InvalidArgument("multi-index length mismatch");
  }

  std::vector<int> exps_;
  int degree_ = 0;
};

/// |orbit(alpha)| = |alpha|! / prod_i alpha_i!, the number of tuples I with
/// alpha(I) = alpha.
inline std::uint64_t orbit_size(const MultiIndex& alpha) {
  // Product of binomials C(partial_sum, alpha_i); each partial product is an
  // integer so the division is exact.
  std::uint64_t out = 1;
  int total = 0;
  for (int e : alpha.exponents()) {
    for (int j = 1; j <= e; ++j) {
      ++total;
      const unsigned __int128 next = static_cast<unsigned __int128>(out) * static_cast<unsigned>(total);
      out = static_cast<std::uint64_t>(next / static_cast<unsigned>(j));
    }
  }
  return out;
}

/// All alpha in N^n with |alpha| = k, ascending.
inline std::vector<MultiIndex> multi_indices(std::size_t n, int k) {
  std::vector<MultiIndex> out;
  if (n == 0) {
    if (k == 0) out.emplace_back(0);
    return out;
  }
  std::vector<int> e(n, 0);
  // Recursive fill of positions 0..n-1 with the remainder forced into the last.
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos + 1 == n) {
      e[pos] = left;
      out.emplace_back(e);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      e[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, k);
  std::sort(out.begin(), out.end());
  return out;
}

/// All alpha with |alpha| <= k, ascending by degree then lexicographically.
inline std::vector<MultiIndex> multi_indices_up_to(std::size_t n, int k) {
  std::vector<MultiIndex> out;
  for (int t = 0; t <= k; ++t) {
    auto level = multi_indices(n, t);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// All multilinear alpha (entries in {0,1}) with |alpha| = k, ascending.
inline std::vector<MultiIndex> multilinear_indices(std::size_t n, int k) {
  std::vector<MultiIndex> out;
  if (k < 0 || static_cast<std::size_t>(k) > n) return out;
  std::vector<int> mask(n, 0);
  std::fill(mask.end() - k, mask.end(), 1);
  do {
    out.emplace_back(mask);
  } while (std::next_permutation(mask.begin(), mask.end()));
  std::sort(out.begin(), out.end());
  return out;
}

/// Calls fn(alpha) for every alpha <= beta (componentwise) with |alpha| = k.
template <class Fn>
void for_each_sub_index(const MultiIndex& beta, int k, Fn&& fn) {
  const std::size_t n = beta.size();
  std::vector<int> e(n, 0);
  std::vector<int> suffix(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + beta[i];
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos == n) {
      if (left == 0) fn(MultiIndex(e));
      return;
    }
    if (left > suffix[pos]) return;
    const int hi = std::min(left, beta[pos]);
    for (int v = 0; v <= hi; ++v) {
      e[pos] = v;
      self(self, pos + 1, left - v);
    }
    e[pos] = 0;
  };
  if (k >= 0 && k <= beta.degree()) rec(rec, 0, k);
}

/// Flat index of a tuple in [n]^k; i_1 is the most significant digit.
inline std::size_t tuple_index(std::span<const int> tuple, std::size_t n) {
  std::size_t idx = 0;
  for (int i : tuple) idx = idx * n + static_cast<std::size_t>(i);
  return idx;
}

/// Inverse of tuple_index.
inline std::vector<int> index_tuple(std::size_t idx, std::size_t n, int k) {
  std::vector<int> out(static_cast<std::size_t>(k));
  for (int j = k; j-- > 0;) {
    out[static_cast<std::size_t>(j)] = static_cast<int>(idx % n);
    idx /= n;
  }
  return out;
}

}  // namespace spherex
