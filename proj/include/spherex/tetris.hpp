#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "spherex/poly.hpp"

namespace spherex {

/// Order-4 template hypergraph with symbolic vertices 0..left-1 (rows) and
/// left..left+right-1 (columns).
struct TemplateHypergraph {
  int left = 0;
  int right = 0;
  std::vector<std::array<int, 4>> edges;

  void validate() const;
};

/// H_{x,y}: one edge on x row and y column vertices.
TemplateHypergraph single_edge(int x, int y);
/// Rows of h then rows of g, columns of h then columns of g; its matrix is the
/// Kronecker product of the two.
TemplateHypergraph disjoint_union(const TemplateHypergraph& h, const TemplateHypergraph& g);
TemplateHypergraph transpose(const TemplateHypergraph& h);
/// Replaces row vertex t by s_rows[t] and column vertex t by s_cols[t], so the
/// matrix becomes P_rows X P_cols^T with (P_s X)[I, .] = X[s.I, .].
TemplateHypergraph permuted(const TemplateHypergraph& h, const std::vector<int>& s_rows, const std::vector<int>& s_cols);

struct TetrisTerm {
  int a = 0, b = 0, c = 0, d = 0;
  bool transposed = false;  // M_A replaced by its transpose
};

/// Solutions of 12a + 8b + 4c + 8d = q in lexicographic order; the transposed
/// branch is listed (right after the main one) only when a >= 1.
std::vector<TetrisTerm> tetris_terms(int q);
/// Size of the stabilizer of term_hypergraph(t) in S_{q/2} x S_{q/2}:
/// (c! 2!^{2c}) (b! (2a+b)! 3!^{2a+2b}) (d! (a+d)! 4!^{a+2d}).
Rational tetris_multiplicity(const TetrisTerm& t);
/// H_A^{a} (+) H_B^{b} (+) H_C^{c} (+) H_D^{d}, with H_A transposed on the
/// transposed branch.
TemplateHypergraph term_hypergraph(const TetrisTerm& t);

Rational factorial_exact(int k);

namespace detail {

template <class T>
void require_pair_sos(const SymMatRep<T>& m, const char* who) {
  if (m.k != 2) throw InvalidArgument(std::string(who) + ": matrix must be indexed by pairs");
  double tol = 0.0;
  if constexpr (!std::is_same_v<T, Rational>) {
    tol = 1e-12 * std::max(1.0, static_cast<double>(m.entries.cwiseAbs().maxCoeff()));
  }
  if (!is_sos_symmetric(m.entries, m.n, 2, tol)) throw InvalidArgument(std::string(who) + ": matrix is not SoS-symmetric");
}

inline std::vector<MultiIndex> tuple_classes(std::size_t n, int k, std::size_t side) {
  std::vector<MultiIndex> out;
  out.reserve(side);
  for (std::size_t r = 0; r < side; ++r) out.push_back(MultiIndex::from_tuple(n, index_tuple(r, n, k)));
  return out;
}

}  // namespace detail

/// Entry [I, J] is the product over edges of T at the instantiated vertices,
/// T[i1,i2,i3,i4] = M[(i1,i2),(i3,i4)].
template <class T>
Mat<T> hypergraphical_matrix(const SymMatRep<T>& m, const TemplateHypergraph& h, const Limits& limits = Limits::defaults()) {
  detail::require_pair_sos(m, "hypergraphical_matrix");
  h.validate();
  const std::size_t n = m.n;
  const std::size_t rows = checked_pow(n, h.left, limits.max_entries);
  const std::size_t cols = checked_pow(n, h.right, limits.max_entries);
  check_capacity(rows * cols, limits.max_entries, "hypergraphical matrix entries");
  Mat<T> out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::vector<int> inst(static_cast<std::size_t>(h.left + h.right));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto i = index_tuple(r, n, h.left);
    std::copy(i.begin(), i.end(), inst.begin());
    for (std::size_t c = 0; c < cols; ++c) {
      const auto j = index_tuple(c, n, h.right);
      std::copy(j.begin(), j.end(), inst.begin() + h.left);
      T v(1);
      for (const auto& e : h.edges) {
        const auto u = [&](int t) { return static_cast<std::size_t>(inst[static_cast<std::size_t>(e[static_cast<std::size_t>(t)])]); };
        v *= m.entries(static_cast<Eigen::Index>(u(0) * n + u(1)), static_cast<Eigen::Index>(u(2) * n + u(3)));
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return out;
}

/// Row-permutation matrix with (P_s X)[I, .] = X[s.I, .], (s.I)_t = I_{s[t]}.
template <class T>
Mat<T> permutation_matrix(std::size_t n, const std::vector<int>& s) {
  const int k = static_cast<int>(s.size());
  const std::size_t side = checked_pow(n, k, static_cast<std::size_t>(-1));
  Mat<T> p = Mat<T>::Zero(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  for (std::size_t r = 0; r < side; ++r) {
    const auto i = index_tuple(r, n, k);
    std::vector<int> moved(i.size());
    for (std::size_t t = 0; t < i.size(); ++t) moved[t] = i[static_cast<std::size_t>(s[t])];
    p(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(tuple_index(moved, n))) = T(1);
  }
  return p;
}

/// P = sum over s in S_k of P_s, built entrywise: P[I, K] counts the s with
/// s.I = K, which is prod_i alpha(I)_i! when K is a rearrangement of I.
template <class T>
Mat<T> permutation_sum(std::size_t n, int k, const Limits& limits = Limits::defaults()) {
  const std::size_t side = checked_pow(n, k, limits.max_entries);
  check_capacity(side * side, limits.max_entries, "permutation sum entries");
  const auto classes = detail::tuple_classes(n, k, side);
  Mat<T> p = Mat<T>::Zero(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  for (std::size_t r = 0; r < side; ++r) {
    T stabilizer(1);
    for (int e : classes[r].exponents()) {
      for (int j = 2; j <= e; ++j) stabilizer *= T(j);
    }
    for (std::size_t c = 0; c < side; ++c) {
      if (classes[c] == classes[r]) p(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = stabilizer;
    }
  }
  return p;
}

/// SoS-symmetrization: every entry replaced by the mean of its class
/// alpha(I) + alpha(J); equals (1/q!) sum over pi in S_q of B^pi.
template <class T>
SymMatRep<T> sos_symmetrize(const Mat<T>& b, std::size_t n, int k) {
  const auto side = static_cast<std::size_t>(b.rows());
  if (b.cols() != b.rows() || side != checked_pow(n, k, static_cast<std::size_t>(-1))) {
    throw InvalidArgument("sos_symmetrize: matrix is not [n]^k x [n]^k");
  }
  const auto classes = detail::tuple_classes(n, k, side);
  std::map<MultiIndex, T> sums;
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) sums[classes[r] + classes[c]] += b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  for (auto& [alpha, s] : sums) s /= T(orbit_size(alpha));
  SymMatRep<T> out{n, k, Mat<T>(b.rows(), b.cols()), true};
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      out.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sums.at(classes[r] + classes[c]);
    }
  }
  return out;
}

/// (M^{(x) q/4})^S for a degree-4 SoS-symmetric M.
template <class T>
SymMatRep<T> sym_kron_power(const SymMatRep<T>& m, int q, const Limits& limits = Limits::defaults()) {
  detail::require_pair_sos(m, "sym_kron_power");
  if (q < 4 || q % 4 != 0) throw InvalidArgument("sym_kron_power: q must be a positive multiple of 4");
  const std::size_t side = checked_pow(m.n, q / 2, limits.max_entries);
  check_capacity(side * side, limits.max_entries, "symmetrized Kronecker power entries");
  return sos_symmetrize<T>(kron_power(m.entries, q / 4, limits), m.n, q / 2);
}

/// M_A^{(x) a} (x) M_B^{(x) b} (x) M_C^{(x) c} (x) M_D^{(x) d} with M_A = M31 (x)
/// M04 (x) M31, M_B = M31 (x) M13, M_C = M, M_D = M04 (x) M40.
template <class T>
Mat<T> term_matrix(const SymMatRep<T>& m, const TetrisTerm& t, const Limits& limits = Limits::defaults()) {
  const Mat<T> m31 = slice(m, 3, 1), m13 = slice(m, 1, 3), m04 = slice(m, 0, 4), m40 = slice(m, 4, 0);
  Mat<T> ma = kron(kron(m31, m04, limits), m31, limits);
  if (t.transposed) ma = Mat<T>(ma.transpose());
  const Mat<T> mb = kron(m31, m13, limits);
  const Mat<T> md = kron(m04, m40, limits);
  Mat<T> out = Mat<T>::Identity(1, 1);
  for (int i = 0; i < t.a; ++i) out = kron(out, ma, limits);
  for (int i = 0; i < t.b; ++i) out = kron(out, mb, limits);
  for (int i = 0; i < t.c; ++i) out = kron(out, m.entries, limits);
  for (int i = 0; i < t.d; ++i) out = kron(out, md, limits);
  return out;
}

/// sum over tetris_terms(q) of P X_term P^T / R(term).
template <class T>
Mat<T> tetris_rhs(const SymMatRep<T>& m, int q, const Limits& limits = Limits::defaults()) {
  detail::require_pair_sos(m, "tetris_rhs");
  if (q < 4 || q % 4 != 0) throw InvalidArgument("tetris_rhs: q must be a positive multiple of 4");
  const Mat<T> p = permutation_sum<T>(m.n, q / 2, limits);
  Mat<T> total = Mat<T>::Zero(p.rows(), p.cols());
  for (const auto& t : tetris_terms(q)) {
    const Mat<T> x = term_matrix(m, t, limits);
    T inv_r;
    if constexpr (std::is_same_v<T, Rational>) {
      inv_r = Rational(1) / tetris_multiplicity(t);
    } else {
      inv_r = T(1) / static_cast<T>(to_double(tetris_multiplicity(t)));
    }
    total += (p * x * p.transpose()) * inv_r;
  }
  return total;
}

struct TetrisReport {
  std::size_t n = 0;
  int q = 0;
  bool exact = false;
  std::size_t terms = 0;
  double max_abs_error = 0.0;
  double max_abs_entry = 0.0;
  double rel_error = 0.0;
  bool pass = false;
};

/// Checks (q/4)! 4!^{q/4} tetris_rhs = q! sym_kron_power entrywise: exactly
/// for Rational, to 1e-9 relative for double.
template <class T>
TetrisReport verify_tetris(const SymMatRep<T>& m, int q, const Limits& limits = Limits::defaults()) {
  const Mat<T> rhs = tetris_rhs(m, q, limits);
  const SymMatRep<T> sym = sym_kron_power(m, q, limits);
  T left_scale = scalar_cast<T>(factorial_exact(q / 4));
  for (int i = 0; i < q / 4; ++i) left_scale *= T(24);
  const T right_scale = scalar_cast<T>(factorial_exact(q));
  const Mat<T> lhs = rhs * left_scale;
  const Mat<T> target = sym.entries * right_scale;
  TetrisReport out;
  out.n = m.n;
  out.q = q;
  out.exact = std::is_same_v<T, Rational>;
  out.terms = tetris_terms(q).size();
  bool equal = true;
  for (Eigen::Index i = 0; i < lhs.size(); ++i) {
    const T diff = lhs.data()[i] - target.data()[i];
    if (diff != T(0)) equal = false;
    out.max_abs_error = std::max(out.max_abs_error, std::abs(to_double(diff)));
    out.max_abs_entry = std::max(out.max_abs_entry, std::abs(to_double(target.data()[i])));
  }
  out.rel_error = out.max_abs_entry > 0.0 ? out.max_abs_error / out.max_abs_entry : out.max_abs_error;
  out.pass = out.exact ? equal : out.rel_error <= 1e-9;
  return out;
}

/// Moment matrix sum_k w_k (x_k (x) x_k)(x_k (x) x_k)^T of a point mixture.
SymMatRep<double> moment_matrix(const std::vector<VecD>& points, const std::vector<double>& weights);

struct SchattenReport {
  double s1_m = 0.0;
  double s1_m31 = 0.0;
  bool hypotheses = false;  // both <= 1 (+1e-12)
  double lifted_s1 = 0.0;
  /// (1/q!) sum over terms (q/4)! 4!^{q/4} ((q/2)!)^2 / R.
  double budget = 0.0;
  bool within_budget = false;
  /// Only asserted when the hypotheses hold.
  bool pass() const { return !hypotheses || within_budget; }
};

SchattenReport lift_schatten_check(const SymMatRep<double>& m, int q, const Limits& limits = Limits::defaults());

struct PsdReport {
  double min_eig_m = 0.0, min_eig_a = 0.0, min_eig_b = 0.0;
  bool m_psd = false, a_psd = false, b_psd = false;
  double lifted_min_eig = 0.0;
  double lifted_norm = 0.0;
  bool lifted_psd = false;
  bool hypotheses() const { return m_psd && a_psd && b_psd; }
  bool pass() const { return !hypotheses() || lifted_psd; }
};

/// PSD tests use the quadratic form, i.e. the symmetric part (X + X^T)/2,
/// with tolerance -1e-8 * spectral norm.
PsdReport lift_psd_check(const SymMatRep<double>& m, int q, const Limits& limits = Limits::defaults());

}  // namespace spherex
