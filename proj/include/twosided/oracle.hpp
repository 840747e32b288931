#pragma once

// Brute-force ground truth. Nothing here calls into kernels.hpp: inverses are
// formed explicitly by row-wise substitution against the identity, products
// are plain triple loops in i-j-l order.

#include <algorithm>
#include <cmath>
#include <utility>

#include "twosided/matrix.hpp"

namespace twosided::oracle {

/// op(A) * op(B) by the textbook triple loop.
template <class T>
DenseMatrix<T> multiply(ConstMatrixView<T> a, Op op_a, ConstMatrixView<T> b, Op op_b) {
  auto at = [&](ConstMatrixView<T> m, Op op, index_t i, index_t j) -> T {
    switch (op) {
      case Op::NoTrans: return m(i, j);
      case Op::Trans: return m(j, i);
      case Op::ConjTrans: return conj_of(m(j, i));
    }
    return T{};
  };
  const index_t m = op_a == Op::NoTrans ? a.rows() : a.cols();
  const index_t k = op_a == Op::NoTrans ? a.cols() : a.rows();
  const index_t kb = op_b == Op::NoTrans ? b.rows() : b.cols();
  const index_t n = op_b == Op::NoTrans ? b.cols() : b.rows();
  if (k != kb) throw InvalidArgument("oracle::multiply: inner dimensions differ");
  DenseMatrix<T> out(m, n);
  for (index_t i = 0; i < m; ++i)
    for (index_t j = 0; j < n; ++j) {
      T s{};
      for (index_t l = 0; l < k; ++l) s += at(a, op_a, i, l) * at(b, op_b, l, j);
      out(i, j) = s;
    }
  return out;
}

template <class T>
DenseMatrix<T> multiply(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  return multiply<T>(a.view(), Op::NoTrans, b.view(), Op::NoTrans);
}

/// Explicit inverse of a lower-triangular operand, one column of the
/// identity at a time: x_i = (e_i - sum_{l<i} L(i,l) x_l) / L(i,i).
template <class T>
DenseMatrix<T> invert_lower(TriangularView<T> l) {
  const index_t n = l.dim();
  for (index_t i = 0; i < n; ++i)
    if (l.diagonal(i) == T(0)) throw SingularFactor(i);
  DenseMatrix<T> inv(n, n);
  for (index_t j = 0; j < n; ++j) {
    for (index_t i = j; i < n; ++i) {
      T s = i == j ? T(1) : T(0);
      for (index_t p = j; p < i; ++p) s -= l.at(i, p) * inv(p, j);
      inv(i, j) = s / l.diagonal(i);
    }
  }
  return inv;
}

/// C = L^{-1} Ahat L^{-H} as a full dense matrix.
template <class T>
DenseMatrix<T> two_sided_trsm(HermitianLowerView<const T> a_hat, TriangularView<T> l) {
  if (a_hat.dim() != l.dim()) throw InvalidArgument("oracle::two_sided_trsm: dimension mismatch");
  const DenseMatrix<T> inv = invert_lower(l);
  const DenseMatrix<T> full = materialize(a_hat);
  const DenseMatrix<T> left = multiply<T>(inv.view(), Op::NoTrans, full.view(), Op::NoTrans);
  return multiply<T>(left.view(), Op::NoTrans, inv.view(), Op::ConjTrans);
}

/// C = L^H Ahat L as a full dense matrix.
template <class T>
DenseMatrix<T> two_sided_trmm(HermitianLowerView<const T> a_hat, TriangularView<T> l) {
  if (a_hat.dim() != l.dim()) throw InvalidArgument("oracle::two_sided_trmm: dimension mismatch");
  const DenseMatrix<T> lf = materialize(l);
  const DenseMatrix<T> full = materialize(a_hat);
  const DenseMatrix<T> right = multiply<T>(full.view(), Op::NoTrans, lf.view(), Op::NoTrans);
  return multiply<T>(lf.view(), Op::ConjTrans, right.view(), Op::NoTrans);
}

/// Real roots (ascending) of a x^2 + b x + c with a > 0 and known-real roots.
inline std::pair<double, double> real_quadratic_roots(double a, double b, double c) {
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) disc = 0.0;
  const double sq = std::sqrt(disc);
  // Avoid cancellation: q = -(b + sign(b) sqrt(disc)) / 2.
  const double q = -0.5 * (b + std::copysign(sq, b));
  double r1, r2;
  if (q == 0.0) {
    r1 = r2 = 0.0;
  } else {
    r1 = q / a;
    r2 = c / q;
  }
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

/// Roots of det(A - lambda B) = 0 for 2x2 Hermitian A and HPD B.
template <class T>
std::pair<double, double> generalized_eigenvalues_2x2(HermitianLowerView<const T> a,
                                                      HermitianLowerView<const T> b) {
  if (a.dim() != 2 || b.dim() != 2) throw InvalidArgument("2x2 operands required");
  const double a11 = real_of(a.base(0, 0)), a22 = real_of(a.base(1, 1));
  const double b11 = real_of(b.base(0, 0)), b22 = real_of(b.base(1, 1));
  const T a21 = a.base(1, 0), b21 = b.base(1, 0);
  const double det_b = b11 * b22 - abs2(b21);
  if (!(b11 > 0.0) || !(det_b > 0.0)) throw InvalidArgument("B is not positive definite");
  // (a11 - l b11)(a22 - l b22) - |a21 - l b21|^2
  const double cross = real_of(a21 * conj_of(b21));
  const double qa = det_b;
  const double qb = -(a11 * b22 + a22 * b11 - 2.0 * cross);
  const double qc = a11 * a22 - abs2(a21);
  return real_quadratic_roots(qa, qb, qc);
}

/// Eigenvalues of a 2x2 Hermitian matrix (the B = I case).
template <class T>
std::pair<double, double> hermitian_eigenvalues_2x2(HermitianLowerView<const T> c) {
  DenseMatrix<T> id = DenseMatrix<T>::identity(2);
  return generalized_eigenvalues_2x2<T>(c, hermitian_lower(std::as_const(id)));
}

}  // namespace twosided::oracle
