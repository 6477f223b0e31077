#include "spherex/tetris.hpp"

#include <algorithm>
#include <tuple>

#include "spherex/spectral.hpp"

namespace spherex {

void TemplateHypergraph::validate() const {
  if (left < 0 || right < 0) throw InvalidArgument("template hypergraph sides must be non-negative");
  for (const auto& e : edges) {
    for (std::size_t i = 0; i < 4; ++i) {
      if (e[i] < 0 || e[i] >= left + right) throw InvalidArgument("template hypergraph edge vertex out of range");
      for (std::size_t j = 0; j < i; ++j) {
        if (e[i] == e[j]) throw InvalidArgument("template hypergraph edge repeats a vertex");
      }
    }
  }
}

TemplateHypergraph single_edge(int x, int y) {
  if (x < 0 || y < 0 || x + y != 4) throw InvalidArgument("single_edge: need x + y = 4");
  return {x, y, {{0, 1, 2, 3}}};
}

TemplateHypergraph disjoint_union(const TemplateHypergraph& h, const TemplateHypergraph& g) {
  TemplateHypergraph out{h.left + g.left, h.right + g.right, {}};
  auto remap_h = [&](int v) { return v < h.left ? v : out.left + (v - h.left); };
  auto remap_g = [&](int v) { return v < g.left ? h.left + v : out.left + h.right + (v - g.left); };
  for (auto e : h.edges) {
    for (int& v : e) v = remap_h(v);
    out.edges.push_back(e);
  }
  for (auto e : g.edges) {
    for (int& v : e) v = remap_g(v);
    out.edges.push_back(e);
  }
  return out;
}

TemplateHypergraph transpose(const TemplateHypergraph& h) {
  TemplateHypergraph out{h.right, h.left, {}};
  for (auto e : h.edges) {
    for (int& v : e) v = v < h.left ? h.right + v : v - h.left;
    out.edges.push_back(e);
  }
  return out;
}

namespace {

void require_permutation(const std::vector<int>& s, int size) {
  std::vector<int> sorted = s;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> ident(static_cast<std::size_t>(size));
  std::iota(ident.begin(), ident.end(), 0);
  if (sorted != ident) throw InvalidArgument("not a permutation of the hypergraph side");
}

}  // namespace

TemplateHypergraph permuted(const TemplateHypergraph& h, const std::vector<int>& s_rows, const std::vector<int>& s_cols) {
  require_permutation(s_rows, h.left);
  require_permutation(s_cols, h.right);
  TemplateHypergraph out{h.left, h.right, {}};
  for (auto e : h.edges) {
    for (int& v : e) v = v < h.left ? s_rows[static_cast<std::size_t>(v)] : h.left + s_cols[static_cast<std::size_t>(v - h.left)];
    out.edges.push_back(e);
  }
  return out;
}

std::vector<TetrisTerm> tetris_terms(int q) {
  if (q < 0 || q % 4 != 0) throw InvalidArgument("tetris_terms: q must be a non-negative multiple of 4");
  std::vector<TetrisTerm> out;
  for (int a = 0; 12 * a <= q; ++a) {
    for (int b = 0; 12 * a + 8 * b <= q; ++b) {
      for (int c = 0; 12 * a + 8 * b + 4 * c <= q; ++c) {
        const int rest = q - 12 * a - 8 * b - 4 * c;
        if (rest % 8 != 0) continue;
        const int d = rest / 8;
        out.push_back({a, b, c, d, false});
        if (a >= 1) out.push_back({a, b, c, d, true});
      }
    }
  }
  return out;
}

Rational factorial_exact(int k) {
  Rational out(1);
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

Rational tetris_multiplicity(const TetrisTerm& t) {
  auto power = [](int base, int e) {
    Rational out(1);
    for (int i = 0; i < e; ++i) out *= base;
    return out;
  };
  const Rational rc = factorial_exact(t.c) * power(2, 2 * t.c);
  const Rational rb = factorial_exact(t.b) * factorial_exact(2 * t.a + t.b) * power(6, 2 * t.a + 2 * t.b);
  const Rational rd = factorial_exact(t.d) * factorial_exact(t.a + t.d) * power(24, t.a + 2 * t.d);
  return rc * rb * rd;
}

TemplateHypergraph term_hypergraph(const TetrisTerm& t) {
  TemplateHypergraph ha = disjoint_union(disjoint_union(single_edge(3, 1), single_edge(0, 4)), single_edge(3, 1));
  if (t.transposed) ha = transpose(ha);
  const TemplateHypergraph hb = disjoint_union(single_edge(3, 1), single_edge(1, 3));
  const TemplateHypergraph hc = single_edge(2, 2);
  const TemplateHypergraph hd = disjoint_union(single_edge(0, 4), single_edge(4, 0));
  TemplateHypergraph out;
  for (int i = 0; i < t.a; ++i) out = disjoint_union(out, ha);
  for (int i = 0; i < t.b; ++i) out = disjoint_union(out, hb);
  for (int i = 0; i < t.c; ++i) out = disjoint_union(out, hc);
  for (int i = 0; i < t.d; ++i) out = disjoint_union(out, hd);
  return out;
}

SymMatRep<double> moment_matrix(const std::vector<VecD>& points, const std::vector<double>& weights) {
  if (points.empty() || points.size() != weights.size()) throw InvalidArgument("moment_matrix: need one weight per point");
  const auto n = static_cast<std::size_t>(points.front().size());
  SymMatRep<double> out{n, 2, MatD::Zero(static_cast<Eigen::Index>(n * n), static_cast<Eigen::Index>(n * n)), true};
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (static_cast<std::size_t>(points[k].size()) != n) throw InvalidArgument("moment_matrix: dimension mismatch");
    const VecD v = tensor_power(points[k], 2);
    out.entries += weights[k] * v * v.transpose();
  }
  return out;
}

SchattenReport lift_schatten_check(const SymMatRep<double>& m, int q, const Limits& limits) {
  SchattenReport out;
  out.s1_m = schatten1(m.entries);
  out.s1_m31 = schatten1(slice(m, 3, 1));
  out.hypotheses = out.s1_m <= 1.0 + 1e-12 && out.s1_m31 <= 1.0 + 1e-12;
  out.lifted_s1 = schatten1(sym_kron_power(m, q, limits).entries);
  Rational scale = factorial_exact(q / 4) * factorial_exact(q / 2) * factorial_exact(q / 2);
  for (int i = 0; i < q / 4; ++i) scale *= 24;
  Rational budget(0);
  for (const auto& t : tetris_terms(q)) budget += scale / tetris_multiplicity(t);
  out.budget = to_double(budget / factorial_exact(q));
  out.within_budget = out.lifted_s1 <= out.budget * (1.0 + 1e-12);
  return out;
}

namespace {

// Smallest eigenvalue of the symmetric part and the tolerance verdict.
std::pair<double, bool> form_psd(const MatD& x) {
  const MatD sym = (x + x.transpose()) / 2.0;
  const VecD eig = eigenvalues(sym);
  const double norm = std::max(std::abs(eig(0)), std::abs(eig(eig.size() - 1)));
  return {eig(0), eig(0) >= -1e-8 * norm};
}

}  // namespace

PsdReport lift_psd_check(const SymMatRep<double>& m, int q, const Limits& limits) {
  PsdReport out;
  const MatD m31 = slice(m, 3, 1), m13 = slice(m, 1, 3), m04 = slice(m, 0, 4);
  std::tie(out.min_eig_m, out.m_psd) = form_psd(m.entries);
  std::tie(out.min_eig_a, out.a_psd) = form_psd(kron(kron(m31, m04, limits), m31, limits));
  std::tie(out.min_eig_b, out.b_psd) = form_psd(kron(m31, m13, limits));
  const MatD lifted = sym_kron_power(m, q, limits).entries;
  const VecD eig = eigenvalues(lifted);
  out.lifted_min_eig = eig(0);
  out.lifted_norm = std::max(std::abs(eig(0)), std::abs(eig(eig.size() - 1)));
  out.lifted_psd = out.lifted_min_eig >= -1e-8 * out.lifted_norm;
  return out;
}

}  // namespace spherex
