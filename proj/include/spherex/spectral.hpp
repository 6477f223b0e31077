#pragma once

#include <map>
#include <string>
#include <utility>

#include "spherex/decompose.hpp"
#include "spherex/poly.hpp"

namespace spherex {

struct EigenPair {
  double value = 0.0;
  VecD vector;
};

/// Largest eigenvalue of a symmetric matrix with a unit eigenvector.
EigenPair lambda_max(const MatD& m);
EigenPair lambda_min(const MatD& m);
/// All eigenvalues, ascending.
VecD eigenvalues(const MatD& m);
/// Throws InvalidArgument unless |M - M^T| <= 1e-10 * max(1, max|M|).
void require_symmetric(const MatD& m, const char* who);

double spectral_norm(const MatD& m);
double frobenius(const MatD& m);
double schatten1(const MatD& m);

enum class BoundMethod { eig_sos_matrix, gershgorin, rowsum, frobenius, block_multilinear };
std::string to_string(BoundMethod m);

/// A value certified to be >= sup over the unit sphere of f (and, where
/// noted by the producer, of |f|).
struct UpperEstimate {
  double value = 0.0;
  BoundMethod method = BoundMethod::eig_sos_matrix;
  std::string witness;
};

/// Matrix representation sum_t M_(t,f) of f assembled from representations
/// of the multilinear parts, M_(t,f)[(I,K),(I,L)] = M_G[K,L] / |orbit(alpha)|
/// for every tuple I in the orbit of alpha, |alpha| = t.
SymMatRep<double> block_multilinear_rep(const HomogPoly& f, const std::map<MultiIndex, SymMatRep<double>>& part_reps,
                                        const Limits& limits = Limits::defaults());

/// n^{d/2} max|f_beta| / d!, for multilinear f of even degree.
UpperEstimate gershgorin_bound(const HomogPoly& f);
/// Largest row sum of the SoS-symmetric matrix, for multilinear f with
/// non-negative coefficients.
UpperEstimate rowsum_bound(const HomogPoly& f);
/// sqrt(sum_beta f_beta^2 / d!), the Frobenius norm of M_f for multilinear f.
UpperEstimate frobenius_sparse_bound(const HomogPoly& f);
/// lambda_max of the SoS-symmetric matrix.
UpperEstimate eig_bound(const HomogPoly& f, const Limits& limits = Limits::defaults());

enum class PolyClass { general, nnc, sparse };
std::string to_string(PolyClass c);

/// Bound on ||f||_2 from the SoS-symmetric matrix of g = f^{q/d}:
/// lambda_max(M_g)^{d/q} when g >= 0 everywhere (q/d even) or f has
/// non-negative coefficients, max|eig(M_g)|^{d/q} otherwise.
UpperEstimate powered_upper_estimate(const HomogPoly& f, int q, PolyClass cls, const Limits& limits = Limits::defaults());

}  // namespace spherex
