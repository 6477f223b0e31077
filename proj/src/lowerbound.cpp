#include "spherex/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "spherex/spectral.hpp"

namespace spherex {

Graph::Graph(std::size_t n) : n_(n), adj_(n, std::vector<char>(n, 0)) {}

void Graph::add_edge(std::size_t u, std::size_t v) {
  if (u >= n_ || v >= n_) throw InvalidArgument("edge endpoint out of range");
  if (u == v) throw InvalidArgument("self-loop at vertex " + std::to_string(u + 1));
  if (adj_[u][v] != 0) return;
  adj_[u][v] = adj_[v][u] = 1;
  const std::pair<std::size_t, std::size_t> e{std::min(u, v), std::max(u, v)};
  edges_.insert(std::lower_bound(edges_.begin(), edges_.end(), e), e);
}

std::size_t Graph::degree(std::size_t v) const {
  return static_cast<std::size_t>(std::count(adj_[v].begin(), adj_[v].end(), char{1}));
}

Graph gnp(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("edge probability must lie in [0, 1]");
  Graph g(n);
  g.p = p;
  g.seed = seed;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng)) g.add_edge(i, j);
    }
  }
  return g;
}

Graph complete_graph(std::size_t n) {
  Graph g(n);
  g.p = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  }
  return g;
}

std::vector<std::array<std::size_t, 4>> four_cliques(const Graph& g) {
  // Each clique a < b < c < d is found once, from its edge (a, b).
  std::vector<std::array<std::size_t, 4>> out;
  for (const auto& [a, b] : g.edges()) {
    std::vector<std::size_t> common;
    for (std::size_t c = b + 1; c < g.n(); ++c) {
      if (g.adjacent(a, c) && g.adjacent(b, c)) common.push_back(c);
    }
    for (std::size_t x = 0; x < common.size(); ++x) {
      for (std::size_t y = x + 1; y < common.size(); ++y) {
        if (g.adjacent(common[x], common[y])) out.push_back({a, b, common[x], common[y]});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

HomogPoly clique_poly(const Graph& g) {
  HomogPoly f(std::max<std::size_t>(g.n(), 1), 4);
  for (const auto& c : four_cliques(g)) {
    std::vector<int> e(f.n(), 0);
    for (std::size_t v : c) e[v] = 1;
    f.add_term(MultiIndex(e), 1.0);
  }
  return f;
}

double PairMatrix::at(std::size_t r, std::size_t c) const {
  auto it = entries.find({r, c});
  return it == entries.end() ? 0.0 : it->second;
}

void PairMatrix::add(std::size_t r, std::size_t c, double v) {
  if (r >= side() || c >= side()) throw InvalidArgument("pair-matrix index out of range");
  auto [it, inserted] = entries.emplace(std::pair{r, c}, v);
  if (!inserted) it->second += v;
  if (it->second == 0.0) entries.erase(it);
}

bool is_sos_symmetric(const PairMatrix& m) {
  const std::size_t n = m.n;
  for (const auto& [key, v] : m.entries) {
    std::array<std::size_t, 4> t{key.first / n, key.first % n, key.second / n, key.second % n};
    std::sort(t.begin(), t.end());
    do {
      if (m.at(t[0] * n + t[1], t[2] * n + t[3]) != v) return false;
    } while (std::next_permutation(t.begin(), t.end()));
  }
  return true;
}

double min_eigenvalue(const PairMatrix& m) {
  std::set<std::size_t> support;
  for (const auto& [key, v] : m.entries) {
    support.insert(key.first);
    support.insert(key.second);
  }
  if (support.empty()) return 0.0;
  const std::vector<std::size_t> idx(support.begin(), support.end());
  const auto k = static_cast<Eigen::Index>(idx.size());
  MatD dense = MatD::Zero(k, k);
  for (const auto& [key, v] : m.entries) {
    const auto r = std::lower_bound(idx.begin(), idx.end(), key.first) - idx.begin();
    const auto c = std::lower_bound(idx.begin(), idx.end(), key.second) - idx.begin();
    dense(r, c) = v;
  }
  const double low = lambda_min(dense).value;
  // Rows outside the support contribute eigenvalue 0.
  return static_cast<std::size_t>(k) < m.side() ? std::min(low, 0.0) : low;
}

double trace(const PairMatrix& m) {
  double t = 0.0;
  for (const auto& [key, v] : m.entries) {
    if (key.first == key.second) t += v;
  }
  return t;
}

double inner(const PairMatrix& a, const PairMatrix& b) {
  double s = 0.0;
  for (const auto& [key, v] : a.entries) s += v * b.at(key.first, key.second);
  return s;
}

CliqueCertificate build_certificate(const Graph& g, CorrectionForm form) {
  if (g.edge_count() == 0) throw DegenerateInstance("graph has no edges");
  const auto cliques = four_cliques(g);
  if (cliques.empty()) throw DegenerateInstance("graph has no 4-clique");
  const std::size_t n = g.n();
  CliqueCertificate out;
  out.n = n;
  out.m = g.edge_count();
  out.clique_count = cliques.size();
  out.form = form;
  out.a.n = n;
  for (auto c : cliques) {
    do {
      out.a.add(c[0] * n + c[1], c[2] * n + c[3], 1.0);
    } while (std::next_permutation(c.begin(), c.end()));
  }

  // Ordered edges E' and the principal submatrix of A on them.
  std::vector<std::size_t> eprime;
  for (const auto& [u, v] : g.edges()) {
    eprime.push_back(u * n + v);
    eprime.push_back(v * n + u);
  }
  std::sort(eprime.begin(), eprime.end());
  const auto side = static_cast<Eigen::Index>(eprime.size());
  MatD sub = MatD::Zero(side, side);
  auto pos = [&](std::size_t idx) { return std::lower_bound(eprime.begin(), eprime.end(), idx) - eprime.begin(); };
  for (const auto& [key, v] : out.a.entries) sub(pos(key.first), pos(key.second)) = v;
  out.lambda_min = lambda_min(sub).value;
  if (!(out.lambda_min < 0.0)) throw DegenerateInstance("A restricted to ordered edges has no negative eigenvalue");
  const double shift = std::abs(out.lambda_min);

  PairMatrix correction;
  correction.n = n;
  for (const auto& [u, v] : g.edges()) {
    correction.add(u * n + v, u * n + v, 1.0);
    correction.add(v * n + u, v * n + u, 1.0);
    if (form == CorrectionForm::symmetrized) {
      correction.add(u * n + v, v * n + u, 1.0);
      correction.add(v * n + u, u * n + v, 1.0);
    }
    correction.add(u * n + u, v * n + v, 1.0);
    correction.add(v * n + v, u * n + u, 1.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t deg = g.degree(i);
    if (deg > 0) correction.add(i * n + i, i * n + i, static_cast<double>(deg));
  }

  const double denom = 4.0 * static_cast<double>(out.m) * shift;
  out.moment.n = n;
  std::set<std::pair<std::size_t, std::size_t>> keys;
  for (const auto& [key, v] : out.a.entries) keys.insert(key);
  for (const auto& [key, v] : correction.entries) keys.insert(key);
  for (const auto& key : keys) {
    out.moment.add(key.first, key.second, (out.a.at(key.first, key.second) + shift * correction.at(key.first, key.second)) / denom);
  }
  out.dual_value = inner(out.a, out.moment);

  auto& ck = out.checks;
  ck.sos_symmetric = is_sos_symmetric(out.moment);
  ck.trace = trace(out.moment);
  ck.min_eig = min_eigenvalue(out.moment);
  ck.dual_formula = 6.0 * static_cast<double>(out.clique_count) / (static_cast<double>(out.m) * shift);
  ck.upper = 24.0 * rowsum_bound(clique_poly(g)).value;
  ck.trace_ok = std::abs(ck.trace - 1.0) <= 1e-9;
  ck.psd_ok = ck.min_eig >= -1e-7;
  ck.dual_ok = std::abs(out.dual_value - ck.dual_formula) <= 1e-6 * ck.dual_formula;
  ck.below_upper = out.dual_value <= ck.upper + 1e-9;
  return out;
}

namespace {

template <std::size_t K>
void require_disjoint(const Graph& g, const std::array<std::vector<std::size_t>, K>& sets) {
  std::vector<int> owner(g.n(), -1);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t v : sets[k]) {
      if (v >= g.n()) throw InvalidArgument("vertex set entry out of range");
      if (owner[v] != -1) throw InvalidArgument("vertex sets overlap at vertex " + std::to_string(v + 1));
      owner[v] = static_cast<int>(k);
    }
  }
}

}  // namespace

std::uint64_t shattered_cliques(const Graph& g, const std::array<std::vector<std::size_t>, 4>& z) {
  require_disjoint(g, z);
  std::uint64_t count = 0;
  for (std::size_t a : z[0]) {
    for (std::size_t b : z[1]) {
      if (!g.adjacent(a, b)) continue;
      for (std::size_t c : z[2]) {
        if (!g.adjacent(a, c) || !g.adjacent(b, c)) continue;
        for (std::size_t d : z[3]) {
          if (g.adjacent(a, d) && g.adjacent(b, d) && g.adjacent(c, d)) ++count;
        }
      }
    }
  }
  return count;
}

std::uint64_t shattered_triangles(const Graph& g, const std::array<std::vector<std::size_t>, 3>& s) {
  require_disjoint(g, s);
  std::uint64_t count = 0;
  for (std::size_t a : s[0]) {
    for (std::size_t b : s[1]) {
      if (!g.adjacent(a, b)) continue;
      for (std::size_t c : s[2]) {
        if (g.adjacent(a, c) && g.adjacent(b, c)) ++count;
      }
    }
  }
  return count;
}

double fsp_lower(const HomogPoly& g, const Limits& limits) {
  if (g.degree() % 2 != 0) throw InvalidArgument("fsp_lower: degree must be even");
  if (g.is_zero()) return 0.0;
  const auto rep = sos_matrix(g, limits);
  const double fro = frobenius(rep.entries);
  return fro * fro / schatten1(rep.entries);
}

GapReport gap_report(const Graph& g, int oracle_restarts, std::uint64_t oracle_seed) {
  GapReport out;
  out.graph = g;
  out.certificate = build_certificate(g);
  out.oracle = brute_norm2(clique_poly(g), oracle_restarts, 2000, 1e-10, oracle_seed);
  out.ratio = out.certificate.dual_value / out.oracle.value;
  out.normalized_ratio = out.ratio / 24.0;
  return out;
}

GapReport gap_report(std::size_t n, double p, std::uint64_t seed, int oracle_restarts) {
  return gap_report(gnp(n, p, seed), oracle_restarts, seed);
}

void write_edge_list(std::ostream& os, const Graph& g) {
  os << "# n " << g.n() << "\n";
  for (const auto& [u, v] : g.edges()) os << u + 1 << " " << v + 1 << "\n";
}

Graph read_edge_list(std::istream& is) {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first[0] == '#') {
      std::string key;
      std::size_t value = 0;
      if (first == "#" && ls >> key >> value && key == "n") n = std::max(n, value);
      continue;
    }
    long long u = 0, v = 0;
    std::istringstream fs(first);
    std::string rest;
    if (!(fs >> u) || !(ls >> v) || (ls >> rest) || u < 1 || v < 1) {
      throw InvalidArgument("edge list line " + std::to_string(lineno) + ": expected two 1-indexed vertices");
    }
    pairs.emplace_back(static_cast<std::size_t>(u - 1), static_cast<std::size_t>(v - 1));
    n = std::max({n, static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
  }
  Graph g(n);
  for (const auto& [u, v] : pairs) g.add_edge(u, v);
  return g;
}

void write_pair_matrix(std::ostream& os, const PairMatrix& m) {
  os << "# side " << m.side() << " nonzeros " << m.entries.size() << "\n";
  os << "# row/col index of pair (i, j) is (i - 1) * " << m.n << " + (j - 1) for vertices i, j in 1.." << m.n << "\n";
  const auto old = os.precision(17);
  for (const auto& [key, v] : m.entries) os << key.first << " " << key.second << " " << v << "\n";
  os.precision(old);
}

}  // namespace spherex
