#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spherex/errors.hpp"
#include "spherex/matrix.hpp"
#include "spherex/multi_index.hpp"
#include "spherex/scalar.hpp"

namespace spherex {

/// Homogeneous polynomial sum_alpha f_alpha x^alpha with a sparse coefficient
/// map. T is the coefficient kind: double, Rational, or std::complex<double>.
/// Degree 0 (a constant) is allowed so that multilinear parts and folds of
/// maximal even part can be stored in the same type.
template <class T>
class BasicPoly {
 public:
  using Scalar = T;
  using TermMap = std::map<MultiIndex, T>;

  BasicPoly() = default;
  BasicPoly(std::size_t n, int d) : n_(n), d_(d) { validate_shape(); }
  BasicPoly(std::size_t n, int d, const std::vector<std::pair<MultiIndex, T>>& terms) : BasicPoly(n, d) {
    for (const auto& [alpha, c] : terms) add_term(alpha, c);
  }

  static BasicPoly constant(std::size_t n, const T& c) {
    BasicPoly out(n, 0);
    out.add_term(MultiIndex(n), c);
    return out;
  }

  static BasicPoly monomial(const MultiIndex& alpha, const T& c = T(1)) {
    BasicPoly out(alpha.size(), alpha.degree());
    out.add_term(alpha, c);
    return out;
  }

  std::size_t n() const { return n_; }
  int degree() const { return d_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  T coeff(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? T(0) : it->second;
  }

  /// Adds c to the coefficient of x^alpha; exact zeros are dropped.
  void add_term(const MultiIndex& alpha, const T& c) {
    if (alpha.size() != n_) throw InvalidArgument("term has " + std::to_string(alpha.size()) + " variables, expected " + std::to_string(n_));
    if (alpha.degree() != d_) throw InvalidArgument("term " + alpha.to_string() + " does not have degree " + std::to_string(d_));
    if (c == T(0)) return;
    auto [it, inserted] = terms_.emplace(alpha, c);
    if (!inserted) {
      it->second += c;
      if (it->second == T(0)) terms_.erase(it);
    }
  }

  bool is_multilinear() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.is_multilinear(); });
  }

  bool is_nonnegative() const {
    if constexpr (is_complex_v<T>) {
      return false;
    } else {
      return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second >= T(0); });
    }
  }

  /// f(x) for any vector type with a scalar that the coefficients convert to.
  template <class V>
  typename V::Scalar operator()(const V& x) const {
    using S = typename V::Scalar;
    if (static_cast<std::size_t>(x.size()) != n_) {
      throw InvalidArgument("eval: point has dimension " + std::to_string(x.size()) + ", polynomial has " + std::to_string(n_));
    }
    // powers[i][e] = x_i^e
    std::vector<std::vector<S>> powers(n_, std::vector<S>(static_cast<std::size_t>(d_) + 1, S(1)));
    for (std::size_t i = 0; i < n_; ++i) {
      for (int e = 1; e <= d_; ++e) powers[i][static_cast<std::size_t>(e)] = powers[i][static_cast<std::size_t>(e) - 1] * x(static_cast<Eigen::Index>(i));
    }
    S total(0);
    for (const auto& [alpha, c] : terms_) {
      S term = scalar_cast<S>(c);
      for (std::size_t i = 0; i < n_; ++i) {
        if (alpha[i] != 0) term *= powers[i][static_cast<std::size_t>(alpha[i])];
      }
      total += term;
    }
    return total;
  }

  BasicPoly operator-() const {
    BasicPoly out = *this;
    for (auto& [alpha, c] : out.terms_) c = -c;
    return out;
  }

  BasicPoly operator+(const BasicPoly& o) const {
    check_same_shape(o);
    BasicPoly out = *this;
    for (const auto& [alpha, c] : o.terms_) out.add_term(alpha, c);
    return out;
  }

  BasicPoly operator-(const BasicPoly& o) const { return *this + (-o); }

  BasicPoly scaled(const T& s) const {
    BasicPoly out(n_, d_);
    if (s == T(0)) return out;
    for (const auto& [alpha, c] : terms_) out.terms_.emplace(alpha, c * s);
    return out;
  }

  /// Product of two polynomials on the same variables; fails loudly once the
  /// result would hold more than limits.max_terms terms.
  BasicPoly multiply(const BasicPoly& o, const Limits& limits = Limits::defaults()) const {
    if (o.n_ != n_) throw InvalidArgument("multiply: variable count mismatch");
    BasicPoly out(n_, d_ + o.d_);
    for (const auto& [a, ca] : terms_) {
      for (const auto& [b, cb] : o.terms_) {
        out.add_term(a + b, ca * cb);
        if (out.terms_.size() > limits.max_terms) {
          throw CapacityError("polynomial product exceeds " + std::to_string(limits.max_terms) + " terms");
        }
      }
    }
    return out;
  }

  bool operator==(const BasicPoly& o) const { return n_ == o.n_ && d_ == o.d_ && terms_ == o.terms_; }

 private:
  void validate_shape() const {
    if (n_ < 1) throw InvalidArgument("polynomial needs at least one variable");
    if (d_ < 0) throw InvalidArgument("polynomial degree must be non-negative");
  }
  void check_same_shape(const BasicPoly& o) const {
    if (o.n_ != n_ || o.d_ != d_) throw InvalidArgument("polynomials differ in variable count or degree");
  }

  std::size_t n_ = 1;
  int d_ = 0;
  TermMap terms_;
};

using HomogPoly = BasicPoly<double>;
using RationalPoly = BasicPoly<Rational>;

template <class To, class From>
BasicPoly<To> poly_cast(const BasicPoly<From>& f) {
  BasicPoly<To> out(f.n(), f.degree());
  for (const auto& [alpha, c] : f.terms()) out.add_term(alpha, scalar_cast<To>(c));
  return out;
}

/// Largest |coefficient|, 0 for the zero polynomial.
template <class T>
double max_abs_coeff(const BasicPoly<T>& f) {
  double out = 0.0;
  for (const auto& [alpha, c] : f.terms()) out = std::max(out, static_cast<double>(std::abs(to_double_any(c))));
  return out;
}

template <class T, class V>
typename V::Scalar eval(const BasicPoly<T>& f, const V& x) {
  return f(x);
}

/// f^r by repeated multiplication (r >= 1).
template <class T>
BasicPoly<T> pow(const BasicPoly<T>& f, int r, const Limits& limits = Limits::defaults()) {
  if (r < 1) throw InvalidArgument("pow: exponent must be >= 1");
  BasicPoly<T> out = f;
  for (int i = 1; i < r; ++i) out = out.multiply(f, limits);
  return out;
}

/// g(s) = f(U s) for an n x m matrix U; g lives on m variables.
template <class T>
BasicPoly<T> restrict(const BasicPoly<T>& f, const Mat<T>& u, const Limits& limits = Limits::defaults()) {
  const std::size_t n = f.n();
  if (static_cast<std::size_t>(u.rows()) != n) throw InvalidArgument("restrict: U must have n rows");
  const std::size_t m = static_cast<std::size_t>(u.cols());
  // linear_powers[i][e] = (sum_j U_ij s_j)^e
  std::vector<std::vector<BasicPoly<T>>> linear_powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    BasicPoly<T> lin(m, 1);
    for (std::size_t j = 0; j < m; ++j) lin.add_term(MultiIndex::unit(m, j), u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    linear_powers[i].push_back(BasicPoly<T>::constant(m, T(1)));
    linear_powers[i].push_back(lin);
  }
  auto lp = [&](std::size_t i, int e) -> const BasicPoly<T>& {
    auto& v = linear_powers[i];
    while (static_cast<int>(v.size()) <= e) v.push_back(v.back().multiply(v[1], limits));
    return v[static_cast<std::size_t>(e)];
  };
  BasicPoly<T> out(m, f.degree());
  for (const auto& [alpha, c] : f.terms()) {
    BasicPoly<T> term = BasicPoly<T>::constant(m, c);
    for (std::size_t i = 0; i < n; ++i) {
      if (alpha[i] != 0) term = term.multiply(lp(i, alpha[i]), limits);
    }
    out = out + term;
  }
  return out;
}

/// Coefficients c_j of f(s a + t b) = sum_j c_j s^{d-j} t^j.
template <class T>
std::vector<T> binary_form(const BasicPoly<T>& f, const Eigen::Matrix<T, Eigen::Dynamic, 1>& a,
                           const Eigen::Matrix<T, Eigen::Dynamic, 1>& b) {
  Mat<T> u(static_cast<Eigen::Index>(f.n()), 2);
  u.col(0) = a;
  u.col(1) = b;
  const BasicPoly<T> g = restrict(f, u);
  std::vector<T> out(static_cast<std::size_t>(f.degree()) + 1, T(0));
  for (const auto& [alpha, c] : g.terms()) out[static_cast<std::size_t>(alpha[1])] = c;
  return out;
}

/// <A, x^1 (x) ... (x) x^d> for the symmetric tensor A of f, via the
/// polarization identity (1/(d! 2^d)) sum_eps (prod eps) f(sum eps_i x^i).
template <class V>
typename V::Scalar polarize(const HomogPoly& f, const std::vector<V>& xs) {
  using S = typename V::Scalar;
  const int d = f.degree();
  if (static_cast<int>(xs.size()) != d) throw InvalidArgument("polarize: need exactly d vectors");
  if (d == 0) return scalar_cast<S>(f.coeff(MultiIndex(f.n())));
  for (const auto& x : xs) {
    if (static_cast<std::size_t>(x.size()) != f.n()) throw InvalidArgument("polarize: dimension mismatch");
  }
  S total(0);
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    V y = V::Zero(static_cast<Eigen::Index>(f.n()));
    int sign = 1;
    for (int i = 0; i < d; ++i) {
      if (mask & (1u << i)) {
        y -= xs[static_cast<std::size_t>(i)];
        sign = -sign;
      } else {
        y += xs[static_cast<std::size_t>(i)];
      }
    }
    total += static_cast<double>(sign) * f(y);
  }
  double scale = std::ldexp(1.0, d);
  for (int i = 2; i <= d; ++i) scale *= i;
  return total / scale;
}

/// Dense matrix indexed by [n]^k x [n]^k (lexicographic tuples) representing a
/// degree-2k polynomial as (x^{(x)k})^T M x^{(x)k}.
template <class T>
struct SymMatRep {
  std::size_t n = 1;
  int k = 0;
  Mat<T> entries;
  bool sos_symmetric = false;

  std::size_t side() const { return static_cast<std::size_t>(entries.rows()); }
};

/// The SoS-symmetric representation M[I,J] = f_{alpha(I)+alpha(J)} / |orbit|.
template <class T>
SymMatRep<T> sos_matrix(const BasicPoly<T>& f, const Limits& limits = Limits::defaults()) {
  if (f.degree() % 2 != 0) throw InvalidArgument("sos_matrix: degree " + std::to_string(f.degree()) + " is odd");
  const int k = f.degree() / 2;
  const std::size_t side = checked_pow(f.n(), k, limits.max_entries);
  check_capacity(side * side, limits.max_entries, "sos_matrix entries");
  SymMatRep<T> out{f.n(), k, Mat<T>::Zero(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side)), true};
  for (const auto& [alpha, c] : f.terms()) {
    std::vector<int> tuple = alpha.sorted_tuple();
    const T value = c / T(orbit_size(alpha));
    const std::span<const int> whole(tuple);
    do {
      const auto row = tuple_index(whole.first(static_cast<std::size_t>(k)), f.n());
      const auto col = tuple_index(whole.last(static_cast<std::size_t>(k)), f.n());
      out.entries(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = value;
    } while (std::next_permutation(tuple.begin(), tuple.end()));
  }
  return out;
}

/// The polynomial a matrix represents: f_alpha = sum over alpha(I)+alpha(J) =
/// alpha of M[I,J].
template <class T>
BasicPoly<T> represented_poly(const SymMatRep<T>& m) {
  BasicPoly<T> out(m.n, 2 * m.k);
  const auto side = static_cast<Eigen::Index>(m.side());
  for (Eigen::Index r = 0; r < side; ++r) {
    const auto i = index_tuple(static_cast<std::size_t>(r), m.n, m.k);
    for (Eigen::Index c = 0; c < side; ++c) {
      if (m.entries(r, c) == T(0)) continue;
      const auto j = index_tuple(static_cast<std::size_t>(c), m.n, m.k);
      out.add_term(MultiIndex::from_tuple(m.n, i) + MultiIndex::from_tuple(m.n, j), m.entries(r, c));
    }
  }
  return out;
}

/// Exhaustive scan: M symmetric and M[I,J] constant on each class
/// alpha(I)+alpha(J). tol is ignored for exact scalars.
template <class T>
bool is_sos_symmetric(const Mat<T>& m, std::size_t n, int k, double tol = 0.0) {
  const auto side = m.rows();
  if (m.cols() != side || static_cast<std::size_t>(side) != checked_pow(n, k, static_cast<std::size_t>(-1))) return false;
  auto close = [&](const T& a, const T& b) {
    if constexpr (std::is_same_v<T, Rational>) {
      return a == b;
    } else {
      return std::abs(a - b) <= tol;
    }
  };
  std::map<MultiIndex, T> seen;
  for (Eigen::Index r = 0; r < side; ++r) {
    const auto i = index_tuple(static_cast<std::size_t>(r), n, k);
    const MultiIndex ai = MultiIndex::from_tuple(n, i);
    for (Eigen::Index c = 0; c < side; ++c) {
      const MultiIndex key = ai + MultiIndex::from_tuple(n, index_tuple(static_cast<std::size_t>(c), n, k));
      auto [it, inserted] = seen.emplace(key, m(r, c));
      if (!inserted && !close(it->second, m(r, c))) return false;
    }
  }
  return true;
}

/// M_{x,y}: the order-4 tensor T[i1..i4] = M[(i1,i2),(i3,i4)] laid out as an
/// n^x by n^y matrix.
template <class T>
Mat<T> slice(const SymMatRep<T>& m, int x, int y) {
  if (m.k != 2) throw InvalidArgument("slice: matrix must be indexed by pairs");
  if (x < 0 || y < 0 || x + y != 4) throw InvalidArgument("slice: need x + y = 4");
  const auto rows = static_cast<Eigen::Index>(checked_pow(m.n, x, static_cast<std::size_t>(-1)));
  const auto cols = static_cast<Eigen::Index>(checked_pow(m.n, y, static_cast<std::size_t>(-1)));
  return reshape(m.entries, rows, cols);
}

enum class CoeffKind { general, nonnegative, multilinear };

/// Random polynomial with every monomial of degree d present with probability
/// density. general: N(0,1) coefficients on all monomials; nonnegative:
/// U(0,1); multilinear: N(0,1) on multilinear monomials only.
HomogPoly random_poly(std::size_t n, int d, std::mt19937_64& rng, CoeffKind kind = CoeffKind::general,
                      double density = 1.0);

/// Random polynomial with small integer coefficients in [-range, range].
RationalPoly random_rational_poly(std::size_t n, int d, std::mt19937_64& rng, int range = 5);

/// Uniform point on the unit sphere in R^n.
VecD random_unit(std::size_t n, std::mt19937_64& rng);

}  // namespace spherex
