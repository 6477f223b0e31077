#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "spherex/errors.hpp"

namespace spherex {

/// Dense row-major matrix. Row-major storage makes the reshapes between
/// [n]^x x [n]^y layouts of one order-4 tensor free.
template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatD = Mat<double>;
using VecD = Eigen::VectorXd;
using VecC = Eigen::VectorXcd;

/// Kronecker product, (A (x) B)[(i,k),(j,l)] = A[i,j] * B[k,l] with the first
/// factor's index most significant (consistent with lexicographic tuples).
template <class T>
Mat<T> kron(const Mat<T>& a, const Mat<T>& b, const Limits& limits = Limits::defaults()) {
  const std::size_t rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
  const std::size_t cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
  check_capacity(rows * cols, limits.max_entries, "kron entries");
  Mat<T> out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Kronecker power A^{(x) r}; r = 0 gives the 1x1 identity.
template <class T>
Mat<T> kron_power(const Mat<T>& a, int r, const Limits& limits = Limits::defaults()) {
  Mat<T> out = Mat<T>::Identity(1, 1);
  for (int i = 0; i < r; ++i) out = kron(out, a, limits);
  return out;
}

/// Same entries, reinterpreted with a new shape in row-major order.
template <class T>
Mat<T> reshape(const Mat<T>& m, Eigen::Index rows, Eigen::Index cols) {
  if (rows * cols != m.size()) throw InvalidArgument("reshape: size mismatch");
  Mat<T> out(rows, cols);
  std::copy(m.data(), m.data() + m.size(), out.data());
  return out;
}

/// x^{(x) k} as a flat vector (lexicographic tuple order).
template <class V>
V tensor_power(const V& x, int k) {
  V out = V::Ones(1);
  for (int r = 0; r < k; ++r) {
    V next(out.size() * x.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      next.segment(i * x.size(), x.size()) = out(i) * x;
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace spherex
