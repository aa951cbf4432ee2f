#ifndef SEIFERT_EXACT_LINALG_HPP
#define SEIFERT_EXACT_LINALG_HPP

// Fraction-free dense linear algebra over exact scalars.
//
// Everything here is templated on the scalar so the same code runs over
// seifert::Integer (the production path) and over built-in integers in tests.
// The scalar must support exact division whenever the quotient is known to be
// integral, which holds for every division these routines perform.

#include <Eigen/Core>

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace seifert {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

/// Bareiss forward elimination on an augmented matrix, in place.
/// Only the first `n` columns are used for pivoting. Returns the sign of the
/// row permutation applied, or 0 when a zero pivot column was hit (singular).
template <typename Scalar>
int bareiss_forward(DenseMatrix<Scalar>& a, Eigen::Index n) {
  int sign = 1;
  Scalar prev(1);
  const Eigen::Index cols = a.cols();
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == Scalar(0)) {
      Eigen::Index r = k + 1;
      while (r < n && a(r, k) == Scalar(0)) ++r;
      if (r == n) return 0;
      a.row(k).swap(a.row(r));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < cols; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
      a(i, k) = Scalar(0);
    }
    prev = a(k, k);
  }
  return sign;
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
}

}  // namespace detail

/// Exact determinant by fraction-free (Bareiss) elimination with row pivoting.
template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(m);
  const Eigen::Index n = m.rows();
  if (n == 0) return Scalar(1);
  DenseMatrix<Scalar> a = m;
  const int sign = detail::bareiss_forward(a, n);
  if (sign == 0) return Scalar(0);
  return sign > 0 ? Scalar(a(n - 1, n - 1)) : Scalar(-a(n - 1, n - 1));
}

/// Matrix with row `skip_row` and column `skip_col` removed.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> minor_matrix(const Eigen::MatrixBase<Derived>& m,
                                                   Eigen::Index skip_row, Eigen::Index skip_col) {
  DenseMatrix<typename Derived::Scalar> out(m.rows() - 1, m.cols() - 1);
  for (Eigen::Index i = 0, oi = 0; i < m.rows(); ++i) {
    if (i == skip_row) continue;
    for (Eigen::Index j = 0, oj = 0; j < m.cols(); ++j) {
      if (j == skip_col) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

/// Adjugate via signed cofactors. O(n^5) with Bareiss minors; used for small n
/// and for singular inputs.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> adjugate_cofactor(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(m);
  const Eigen::Index n = m.rows();
  DenseMatrix<Scalar> adj(n, n);
  if (n == 1) {
    adj(0, 0) = Scalar(1);
    return adj;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Scalar c = determinant(minor_matrix(m, j, i));
      adj(i, j) = ((i + j) % 2 == 0) ? c : Scalar(-c);
    }
  }
  return adj;
}

/// Adjugate of a nonsingular matrix by Bareiss elimination of [M | I] followed by
/// fraction-free back substitution: the solve yields det(PM) * M^-1, which is
/// +/- adj(M). Returns an empty matrix if M is singular.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> adjugate_bareiss(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(m);
  const Eigen::Index n = m.rows();
  DenseMatrix<Scalar> aug(n, 2 * n);
  aug.leftCols(n) = m;
  aug.rightCols(n).setZero();
  for (Eigen::Index i = 0; i < n; ++i) aug(i, n + i) = Scalar(1);

  const int sign = detail::bareiss_forward(aug, n);
  if (sign == 0 || aug(n - 1, n - 1) == Scalar(0)) return {};
  const Scalar d = aug(n - 1, n - 1);

  DenseMatrix<Scalar> x(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      Scalar acc = d * aug(i, n + col);
      for (Eigen::Index k = i + 1; k < n; ++k) acc = acc - aug(i, k) * x(k, col);
      x(i, col) = acc / aug(i, i);
    }
  }
  if (sign < 0) x = -x;
  return x;
}

/// Exact adjugate: adj(M) * M = M * adj(M) = det(M) * I.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> adjugate(const Eigen::MatrixBase<Derived>& m) {
  detail::require_square(m);
  if (m.rows() <= 6) return adjugate_cofactor(m);
  auto adj = adjugate_bareiss(m);
  if (adj.size() == 0) return adjugate_cofactor(m);
  return adj;
}

/// |M_ii| > sum_{j != i} |M_ij| for every row.
template <typename Derived>
bool is_strictly_diagonally_dominant(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  detail::require_square(m);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Scalar off(0);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j != i) off = off + abs(m(i, j));
    }
    if (!(abs(m(i, i)) > off)) return false;
  }
  return true;
}

}  // namespace seifert

#endif  // SEIFERT_EXACT_LINALG_HPP
