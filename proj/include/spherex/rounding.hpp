#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spherex/decompose.hpp"
#include "spherex/spectral.hpp"

namespace spherex {

using Complex = std::complex<double>;

/// Parameters that produced a candidate. Root-of-unity choices are stored as
/// exponents: xi = j means Xi = exp(2 pi i j / (|gamma| + 1)), zeta[i] = j
/// means zeta_i = exp(2 pi i j / (2 alpha_i + 1)).
struct Provenance {
  std::string kind;  // "nnc", "general", "monomial", "exact"
  MultiIndex alpha;
  MultiIndex gamma;
  int xi = 0;
  std::vector<int> zeta;
  std::vector<int> mask;
  std::vector<int> signs;  // monomial candidates: +1 / -1 per coordinate
  double c1 = 0.0;
  double c2 = 0.0;
};

struct Candidate {
  VecD x;
  Provenance provenance;
};

struct OptReport {
  VecD x_best;
  double value = 0.0;
  std::optional<UpperEstimate> upper;
  /// upper / value; empty when value is 0 or no upper estimate was computed.
  std::optional<double> ratio;
  std::size_t candidates_evaluated = 0;
  std::string method;
  int q = 0;
  Provenance provenance;
};

struct QuadMax {
  VecD x;
  double value = 0.0;
};

/// max over unit x of |x^T Q x| by eigendecomposition (lambda_max wins ties).
QuadMax quad_argmax(const MatD& q);

/// max over real unit x of |x^T (A + iB) x| = max_theta lambda_max(A cos + B sin).
/// Scans theta_grid angles, refines the best one by golden section and
/// returns the top eigenvector there.
QuadMax complex_quad_argmax(const MatD& a, const MatD& b, int theta_grid = 64);

/// Symmetric matrix of a quadratic form: Q_ii = c_{2e_i}, Q_ij = c_{e_i+e_j}/2.
MatD quadratic_matrix(const HomogPoly& q);
std::pair<MatD, MatD> quadratic_matrices(const BasicPoly<Complex>& q);

/// (d-2, 2)-folded polynomial whose unfolding is f: fold_quadratic for even
/// d >= 4, fold_split otherwise.
FoldedPoly<double> quadratic_fold(const HomogPoly& f);

struct Decoupled {
  VecD x;
  double value = 0.0;
  std::vector<int> signs;
};

/// Best |f((sum_i s_i x^i) / |.|)| over all 2^d sign patterns s; ties go to
/// the first pattern in binary order (bit i set means s_i = -1).
Decoupled decouple(const HomogPoly& f, const std::vector<VecD>& xs);

struct RealVector {
  VecD x;
  double value = 0.0;
  /// Number of copies of b in the chosen product a^{d-j} (x) b^j.
  int b_copies = 0;
};

/// Real unit vector from a complex unit z = a + ib: pick j maximising the
/// normalised |<A, a^{d-j} (x) b^j>| and decouple. A real z is returned as is.
RealVector complex_to_real(const HomogPoly& f, const VecC& z);

/// Provable constant: complex_to_real value >= |f(z)| / 2^{c d} with
/// c = 2.5, from 2^d product choices and d^d / d! <= e^d for decoupling.
inline constexpr double kComplexToRealExponent = 2.5;

struct ChebResult {
  double p = 0.0;
  double value = 0.0;
};

/// Maximises |p(x)| on [0, 1] over `grid` Chebyshev-Lobatto nodes, refining
/// each local maximum by golden section.
ChebResult cheb_extract(const std::function<double(double)>& evals, int t, int grid);

std::vector<Candidate> nnc_candidates(const HomogPoly& f, int q, const Limits& limits = Limits::defaults());

struct GeneralOptions {
  int c_grid = 33;
  int theta_grid = 64;
};

/// One real candidate per y in the candidate set S: the best c1 y + c2 w on
/// the (c1, c2) grid, refined, then converted by complex_to_real.
/// grid_points receives the number of (y, c1, c2) combinations scored.
std::vector<Candidate> general_candidates(const HomogPoly& f, int q, const GeneralOptions& opts = {},
                                          const Limits& limits = Limits::defaults(), std::size_t* grid_points = nullptr);

/// sqrt(beta / d) with every sign pattern (first coordinate of the support
/// kept positive), one set per monomial of f.
std::vector<Candidate> monomial_candidates(const HomogPoly& f, const Limits& limits = Limits::defaults());

/// Exact maximiser for f = 0, d = 1 and d = 2.
VecD exact_vector(const HomogPoly& f);

/// Regenerates a candidate vector from its provenance.
VecD replay(const HomogPoly& f, const Provenance& prov, const GeneralOptions& opts = {});

OptReport best_candidate(const HomogPoly& f, const std::vector<Candidate>& cands);

enum class Method { automatic, general, nnc, sparse };
std::string to_string(Method m);
Method parse_method(const std::string& s);

/// Polynomials with fewer terms than variables count as sparse for auto.
inline constexpr std::size_t sparse_threshold(std::size_t n) { return n; }

OptReport optimize(const HomogPoly& f, int q, Method method = Method::automatic, const GeneralOptions& opts = {},
                   const Limits& limits = Limits::defaults());

/// Constructive weak decoupling for one alpha: the expectation
/// E(p) = E[f(z) Xi prod zeta_i] over roots of unity and Bernoulli(p) masks,
/// z = Xi b o xbar / (2 alpha + 1) + zeta o sqrt(alpha / |alpha|), is
/// maximised over p by cheb_extract, then the best realisation at p* is
/// made real.
struct WeakDecoupling {
  double p = 0.0;
  double expectation = 0.0;       // |E(p*)|
  double leading = 0.0;           // |coefficient of p^k| = |G(xbar)| prod (alpha_i/t)^{alpha_i}
  int k = 0;
  VecC z;                          // best realisation, normalised
  RealVector real;
};
WeakDecoupling weak_decoupling_lift(const HomogPoly& f, const MultiIndex& alpha, const VecD& xbar, int cheb_grid = 64);

/// E(p) from weak_decoupling_lift, by exact enumeration.
double weak_decoupling_expectation(const HomogPoly& f, const MultiIndex& alpha, const VecD& xbar, double p);

}  // namespace spherex
