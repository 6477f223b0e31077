#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spherex/oracle.hpp"
#include "spherex/poly.hpp"

namespace spherex {

/// Simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n);

  void add_edge(std::size_t u, std::size_t v);
  bool adjacent(std::size_t u, std::size_t v) const { return adj_[u][v] != 0; }
  std::size_t n() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t degree(std::size_t v) const;
  /// Edges as (u, v) with u < v, ascending.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

  double p = 0.0;
  std::uint64_t seed = 0;

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<char>> adj_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

Graph gnp(std::size_t n, double p, std::uint64_t seed);
Graph complete_graph(std::size_t n);

/// Vertex sets {a < b < c < d} of every 4-clique, ascending.
std::vector<std::array<std::size_t, 4>> four_cliques(const Graph& g);

/// Sum of x_a x_b x_c x_d over the 4-cliques.
HomogPoly clique_poly(const Graph& g);

/// Sparse square matrix indexed by pairs (i, j) in [n]^2 through i * n + j.
struct PairMatrix {
  std::size_t n = 0;
  std::map<std::pair<std::size_t, std::size_t>, double> entries;

  std::size_t side() const { return n * n; }
  double at(std::size_t r, std::size_t c) const;
  void add(std::size_t r, std::size_t c, double v);
};

/// Exact entry-equality scan over the orbit class alpha(I) + alpha(J) of each
/// nonzero entry; a class must be filled completely with one value.
bool is_sos_symmetric(const PairMatrix& m);

/// Smallest eigenvalue over the rows and columns that carry a nonzero entry
/// (the remaining principal block is zero).
double min_eigenvalue(const PairMatrix& m);
double trace(const PairMatrix& m);
double inner(const PairMatrix& a, const PairMatrix& b);

enum class CorrectionForm {
  /// I_E' + Q_E' + swap_E': the swap term puts 1 at [(i,j),(j,i)] so every
  /// class 2e_i + 2e_j is filled.
  symmetrized,
  /// I_E' + Q_E' alone; leaves [(i,j),(j,i)] empty and fails the symmetry check.
  as_written,
};

struct CertificateChecks {
  bool sos_symmetric = false;
  double trace = 0.0;
  double min_eig = 0.0;
  double dual_formula = 0.0;  // 6 |cliques| / (m |lambda_min|)
  double upper = 0.0;         // 24 * rowsum bound of f, an upper estimate of <A, M>
  bool trace_ok = false;
  bool psd_ok = false;
  bool dual_ok = false;
  bool below_upper = false;
  bool ok() const { return sos_symmetric && trace_ok && psd_ok && dual_ok && below_upper; }
};

struct CliqueCertificate {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t clique_count = 0;
  PairMatrix a;  // natural representation of 24 f
  double lambda_min = 0.0;
  PairMatrix moment;  // (A + |lambda_min| D) / Tr
  double dual_value = 0.0;
  CorrectionForm form = CorrectionForm::symmetrized;
  CertificateChecks checks;
};

/// Throws DegenerateInstance when G has no edge or no 4-clique.
CliqueCertificate build_certificate(const Graph& g, CorrectionForm form = CorrectionForm::symmetrized);

/// Ordered 4-cliques (i1, .., i4) with i_k in z[k]. Sets must be disjoint.
std::uint64_t shattered_cliques(const Graph& g, const std::array<std::vector<std::size_t>, 4>& z);
std::uint64_t shattered_triangles(const Graph& g, const std::array<std::vector<std::size_t>, 3>& s);

/// ||M_g||_F^2 / ||M_g||_S1 for the SoS-symmetric matrix of g; 0 for g = 0.
double fsp_lower(const HomogPoly& g, const Limits& limits = Limits::defaults());

struct GapReport {
  Graph graph;
  CliqueCertificate certificate;
  Norm2Estimate oracle;
  /// dual_value / oracle ||f||_2.
  double ratio = 0.0;
  /// dual_value / (24 oracle ||f||_2): both sides measured on f.
  double normalized_ratio = 0.0;
};

GapReport gap_report(const Graph& g, int oracle_restarts = 200, std::uint64_t oracle_seed = 0);
GapReport gap_report(std::size_t n, double p, std::uint64_t seed, int oracle_restarts = 200);

/// Edge list: optional "# n N" header, then one "u v" pair per line, 1-indexed.
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);

/// Nonzero entries as "row col value" lines, row-major, after a header that
/// documents the index map (i, j) -> i * n + j (0-based, vertex i+1).
void write_pair_matrix(std::ostream& os, const PairMatrix& m);

}  // namespace spherex
