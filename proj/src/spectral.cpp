#include "spherex/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace spherex {

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve(const MatD& m, const char* who, bool vectors) {
  require_symmetric(m, who);
  if (m.rows() == 0) throw InvalidArgument(std::string(who) + ": empty matrix");
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Eigen::MatrixXd(m), vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
}

VecD singular_values(const MatD& m) {
  if (m.size() == 0) return VecD();
  return Eigen::BDCSVD<Eigen::MatrixXd>(Eigen::MatrixXd(m)).singularValues();
}

double factorial(int k) {
  double out = 1.0;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

}  // namespace

void require_symmetric(const MatD& m, const char* who) {
  if (m.rows() != m.cols()) throw InvalidArgument(std::string(who) + ": matrix is not square");
  if (m.size() == 0) return;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidArgument(std::string(who) + ": matrix is not symmetric");
  }
}

EigenPair lambda_max(const MatD& m) {
  const auto es = solve(m, "lambda_max", true);
  const auto last = m.rows() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

EigenPair lambda_min(const MatD& m) {
  const auto es = solve(m, "lambda_min", true);
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

VecD eigenvalues(const MatD& m) { return solve(m, "eigenvalues", false).eigenvalues(); }

double spectral_norm(const MatD& m) {
  const VecD s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(0);
}

double frobenius(const MatD& m) { return m.norm(); }

double schatten1(const MatD& m) { return singular_values(m).sum(); }

std::string to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::eig_sos_matrix: return "eig_sos_matrix";
    case BoundMethod::gershgorin: return "gershgorin";
    case BoundMethod::rowsum: return "rowsum";
    case BoundMethod::frobenius: return "frobenius";
    case BoundMethod::block_multilinear: return "block_multilinear";
  }
  return "unknown";
}

std::string to_string(PolyClass c) {
  switch (c) {
    case PolyClass::general: return "general";
    case PolyClass::nnc: return "nnc";
    case PolyClass::sparse: return "sparse";
  }
  return "unknown";
}

SymMatRep<double> block_multilinear_rep(const HomogPoly& f, const std::map<MultiIndex, SymMatRep<double>>& part_reps,
                                        const Limits& limits) {
  if (f.degree() % 2 != 0) throw InvalidArgument("block_multilinear_rep: odd degree");
  const int k = f.degree() / 2;
  const std::size_t n = f.n();
  const auto parts = multilinear_parts(f);
  if (parts.size() != part_reps.size()) throw InvalidArgument("block_multilinear_rep: part representations do not match the multilinear parts");
  const std::size_t side = checked_pow(n, k, limits.max_entries);
  check_capacity(side * side, limits.max_entries, "block_multilinear_rep entries");
  SymMatRep<double> out{n, k, MatD::Zero(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side)), false};
  for (const auto& [alpha, g] : parts) {
    auto it = part_reps.find(alpha);
    if (it == part_reps.end()) throw InvalidArgument("block_multilinear_rep: no representation for part " + alpha.to_string());
    const SymMatRep<double>& rep = it->second;
    const int t = alpha.degree();
    if (rep.n != n || rep.k != k - t || rep.side() != checked_pow(n, k - t, side)) {
      throw InvalidArgument("block_multilinear_rep: representation of part " + alpha.to_string() + " has the wrong shape");
    }
    const HomogPoly represented = represented_poly(rep);
    if (max_abs_coeff(represented - g) > 1e-9 * std::max(1.0, max_abs_coeff(g))) {
      throw InvalidArgument("block_multilinear_rep: matrix given for part " + alpha.to_string() + " does not represent it");
    }
    const double weight = 1.0 / static_cast<double>(orbit_size(alpha));
    const std::size_t inner = rep.side();
    std::vector<int> tuple = alpha.sorted_tuple();
    do {
      const std::size_t base = tuple_index(tuple, n) * inner;
      out.entries.block(static_cast<Eigen::Index>(base), static_cast<Eigen::Index>(base), static_cast<Eigen::Index>(inner),
                        static_cast<Eigen::Index>(inner)) += weight * rep.entries;
    } while (std::next_permutation(tuple.begin(), tuple.end()));
  }
  return out;
}

UpperEstimate gershgorin_bound(const HomogPoly& f) {
  if (!f.is_multilinear()) throw InvalidArgument("gershgorin_bound: polynomial is not multilinear");
  if (f.degree() % 2 != 0) throw InvalidArgument("gershgorin_bound: odd degree");
  double top = 0.0;
  for (const auto& [beta, c] : f.terms()) top = std::max(top, std::abs(c));
  const double value = std::pow(static_cast<double>(f.n()), f.degree() / 2) * top / factorial(f.degree());
  return {value, BoundMethod::gershgorin, "n^{d/2} max|coeff| / d!"};
}

UpperEstimate rowsum_bound(const HomogPoly& f) {
  if (!f.is_multilinear()) throw InvalidArgument("rowsum_bound: polynomial is not multilinear");
  if (!f.is_nonnegative()) throw InvalidArgument("rowsum_bound: negative coefficient present");
  if (f.degree() % 2 != 0) throw InvalidArgument("rowsum_bound: odd degree");
  // Row I (distinct entries) of M_f sums f_beta / d! over the k! orderings of
  // each beta - alpha(I), for every beta containing alpha(I).
  const int k = f.degree() / 2;
  std::map<MultiIndex, double> rows;
  for (const auto& [beta, c] : f.terms()) {
    for_each_sub_index(beta, k, [&](const MultiIndex& alpha) { rows[alpha] += c; });
  }
  double top = 0.0;
  for (const auto& [alpha, s] : rows) top = std::max(top, s);
  return {top * factorial(k) / factorial(f.degree()), BoundMethod::rowsum, "max row sum of the SoS-symmetric matrix"};
}

UpperEstimate frobenius_sparse_bound(const HomogPoly& f) {
  if (!f.is_multilinear()) throw InvalidArgument("frobenius_sparse_bound: polynomial is not multilinear");
  double sum = 0.0;
  for (const auto& [beta, c] : f.terms()) sum += c * c;
  return {std::sqrt(sum / factorial(f.degree())), BoundMethod::frobenius, "Frobenius norm of the SoS-symmetric matrix"};
}

UpperEstimate eig_bound(const HomogPoly& f, const Limits& limits) {
  const auto m = sos_matrix(f, limits);
  return {lambda_max(m.entries).value, BoundMethod::eig_sos_matrix, "lambda_max of the SoS-symmetric matrix"};
}

UpperEstimate powered_upper_estimate(const HomogPoly& f, int q, PolyClass cls, const Limits& limits) {
  const int d = f.degree();
  if (q < 1 || q % d != 0) throw InvalidArgument("q = " + std::to_string(q) + " is not a positive multiple of d = " + std::to_string(d));
  if (q % 2 != 0) throw InvalidArgument("q = " + std::to_string(q) + " must be even");
  if (cls == PolyClass::nnc && !f.is_nonnegative()) throw InvalidArgument("nnc class requires non-negative coefficients");
  const int r = q / d;
  checked_pow(f.n(), q, limits.max_entries);
  const HomogPoly g = pow(f, r, limits);
  const auto m = sos_matrix(g, limits);
  const VecD eig = eigenvalues(m.entries);
  const double top = eig(eig.size() - 1);
  const double bottom = eig(0);
  const bool one_sided = (r % 2 == 0) || cls == PolyClass::nnc;
  const double base = one_sided ? std::max(top, 0.0) : std::max(std::abs(top), std::abs(bottom));
  std::string witness = std::string(one_sided ? "lambda_max" : "max |eigenvalue|") + " of the SoS-symmetric matrix of f^" +
                        std::to_string(r) + ", raised to 1/" + std::to_string(r);
  return {std::pow(base, 1.0 / r), BoundMethod::eig_sos_matrix, witness};
}

}  // namespace spherex
