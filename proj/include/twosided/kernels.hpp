#pragma once

// Reference level-3 kernels. Every public entry point validates shapes,
// performs the update with a fixed loop order, and reports its flop count to
// the optional KernelContext.
//
// Loop-order contract (relied on by the bitwise tests): each output element
// of gemm/hemm/trmm accumulates acc = sum_l x_l * y_l starting from zero in
// increasing l and is stored as alpha*acc + beta*c (alpha*acc when beta = 0;
// C is then never read). her2k stores alpha*acc1 + conj(alpha)*acc2 + beta*c
// and herk alpha*acc + beta*c, with the diagonal's imaginary part cleared.
//
// A call with an empty output, or with an empty inner dimension and beta = 1,
// is a no-op: nothing is written, counted, or logged.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "twosided/ledger.hpp"
#include "twosided/matrix.hpp"

namespace twosided {

template <class T>
using Id = std::type_identity_t<T>;

namespace detail {

inline std::uint64_t u64(index_t x) { return static_cast<std::uint64_t>(x); }

inline std::string dims(index_t m, index_t n) { return std::to_string(m) + "x" + std::to_string(n); }

template <class T>
Shape shape_of(ConstMatrixView<T> a) {
  return {a.rows(), a.cols()};
}

template <class T>
Shape op_shape(Op op, ConstMatrixView<T> a) {
  return op == Op::NoTrans ? Shape{a.rows(), a.cols()} : Shape{a.cols(), a.rows()};
}

/// op(a) as a contiguous matrix.
template <class T>
DenseMatrix<T> packed(Op op, ConstMatrixView<T> a) {
  if (op == Op::NoTrans) return DenseMatrix<T>::copy_of(a);
  DenseMatrix<T> out(a.cols(), a.rows());
  for (index_t j = 0; j < a.cols(); ++j)
    for (index_t i = 0; i < a.rows(); ++i)
      out(j, i) = op == Op::ConjTrans ? conj_of(a(i, j)) : a(i, j);
  return out;
}

/// Writes op(src) back into dst, where src = op(dst) was packed earlier.
template <class T>
void unpack(Op op, const DenseMatrix<T>& src, MatrixView<T> dst) {
  for (index_t j = 0; j < dst.cols(); ++j)
    for (index_t i = 0; i < dst.rows(); ++i)
      dst(i, j) = op == Op::ConjTrans ? conj_of(src(j, i)) : src(j, i);
}

template <class T>
inline T finish(T alpha, T acc, T beta, T c) {
  return beta == T(0) ? alpha * acc : alpha * acc + beta * c;
}

/// C := alpha*A*B + beta*C, no checks, no instrumentation.
template <class T>
void gemm_nn(T alpha, ConstMatrixView<T> a, ConstMatrixView<T> b, T beta, MatrixView<T> c) {
  const index_t m = c.rows();
  const index_t n = c.cols();
  const index_t k = a.cols();
  if (m == 0 || n == 0) return;
  constexpr index_t kRows = 256;
  constexpr index_t kCols = 4;
  std::vector<T> acc(static_cast<std::size_t>(kRows * kCols));
  for (index_t i0 = 0; i0 < m; i0 += kRows) {
    const index_t mb = std::min(kRows, m - i0);
    for (index_t j0 = 0; j0 < n; j0 += kCols) {
      const index_t nb = std::min(kCols, n - j0);
      std::fill(acc.begin(), acc.end(), T{});
      T* __restrict acc0 = acc.data();
      T* __restrict acc1 = acc0 + kRows;
      T* __restrict acc2 = acc1 + kRows;
      T* __restrict acc3 = acc2 + kRows;
      if (nb == kCols) {
        for (index_t l = 0; l < k; ++l) {
          const T* __restrict al = a.col(l) + i0;
          const T s0 = b(l, j0), s1 = b(l, j0 + 1), s2 = b(l, j0 + 2), s3 = b(l, j0 + 3);
          for (index_t i = 0; i < mb; ++i) {
            const T x = al[i];
            acc0[i] += x * s0;
            acc1[i] += x * s1;
            acc2[i] += x * s2;
            acc3[i] += x * s3;
          }
        }
      } else {
        for (index_t l = 0; l < k; ++l) {
          const T* __restrict al = a.col(l) + i0;
          for (index_t jj = 0; jj < nb; ++jj) {
            const T s = b(l, j0 + jj);
            T* __restrict aj = acc0 + jj * kRows;
            for (index_t i = 0; i < mb; ++i) aj[i] += al[i] * s;
          }
        }
      }
      for (index_t jj = 0; jj < nb; ++jj) {
        T* cj = c.col(j0 + jj) + i0;
        const T* aj = acc0 + jj * kRows;
        for (index_t i = 0; i < mb; ++i) cj[i] = finish(alpha, aj[i], beta, cj[i]);
      }
    }
  }
}

/// Lower triangle of C := alpha*A*B^H + conj(alpha)*B*A^H + beta*C for
/// n x k operands. Columns are processed in groups of four; the rows above
/// the diagonal inside a group are accumulated but never stored.
template <class T>
void her2k_lower_n(T alpha, ConstMatrixView<T> a, ConstMatrixView<T> b, real_t<T> beta,
                   MatrixView<T> c) {
  const index_t n = c.rows();
  const index_t k = a.cols();
  constexpr index_t kCols = 4;
  std::vector<T> acc1(static_cast<std::size_t>(n * kCols));
  std::vector<T> acc2(static_cast<std::size_t>(n * kCols));
  const T calpha = conj_of(alpha);
  for (index_t j0 = 0; j0 < n; j0 += kCols) {
    const index_t nb = std::min(kCols, n - j0);
    const index_t len = n - j0;
    std::fill(acc1.begin(), acc1.end(), T{});
    std::fill(acc2.begin(), acc2.end(), T{});
    for (index_t l = 0; l < k; ++l) {
      const T* __restrict al = a.col(l) + j0;
      const T* __restrict bl = b.col(l) + j0;
      for (index_t jj = 0; jj < nb; ++jj) {
        const T s1 = conj_of(b(j0 + jj, l));
        const T s2 = conj_of(a(j0 + jj, l));
        T* __restrict x1 = acc1.data() + jj * n;
        T* __restrict x2 = acc2.data() + jj * n;
        for (index_t i = jj; i < len; ++i) {
          x1[i] += al[i] * s1;
          x2[i] += bl[i] * s2;
        }
      }
    }
    for (index_t jj = 0; jj < nb; ++jj) {
      const index_t j = j0 + jj;
      T* cj = c.col(j);
      const T* x1 = acc1.data() + jj * n;
      const T* x2 = acc2.data() + jj * n;
      for (index_t i = jj; i < len; ++i) {
        const T v = alpha * x1[i] + calpha * x2[i];
        cj[j0 + i] = beta == 0 ? v : v + beta * cj[j0 + i];
      }
      if constexpr (is_complex_v<T>) cj[j] = T(cj[j].real());
    }
  }
}

/// Lower triangle of C := alpha*A*A^H + beta*C for an n x k operand.
template <class T>
void herk_lower_n(real_t<T> alpha, ConstMatrixView<T> a, real_t<T> beta, MatrixView<T> c) {
  const index_t n = c.rows();
  const index_t k = a.cols();
  constexpr index_t kCols = 4;
  std::vector<T> acc(static_cast<std::size_t>(n * kCols));
  for (index_t j0 = 0; j0 < n; j0 += kCols) {
    const index_t nb = std::min(kCols, n - j0);
    const index_t len = n - j0;
    std::fill(acc.begin(), acc.end(), T{});
    for (index_t l = 0; l < k; ++l) {
      const T* __restrict al = a.col(l) + j0;
      for (index_t jj = 0; jj < nb; ++jj) {
        const T s = conj_of(a(j0 + jj, l));
        T* __restrict x = acc.data() + jj * n;
        for (index_t i = jj; i < len; ++i) x[i] += al[i] * s;
      }
    }
    for (index_t jj = 0; jj < nb; ++jj) {
      const index_t j = j0 + jj;
      T* cj = c.col(j);
      const T* x = acc.data() + jj * n;
      for (index_t i = jj; i < len; ++i) {
        const T v = alpha * x[i];
        cj[j0 + i] = beta == 0 ? v : v + beta * cj[j0 + i];
      }
      if constexpr (is_complex_v<T>) cj[j] = T(cj[j].real());
    }
  }
}

template <class T>
void check_nonsingular(TriangularView<T> l) {
  if (l.unit()) return;
  for (index_t i = 0; i < l.dim(); ++i)
    if (l.base(i, i) == T(0)) throw SingularFactor(i);
}

/// B := L^{-1} B (forward substitution, column axpy form).
template <class T>
void trsm_left_lower_n(TriangularView<T> l, MatrixView<T> b) {
  const index_t m = l.dim();
  constexpr index_t kCols = 4;
  for (index_t j0 = 0; j0 < b.cols(); j0 += kCols) {
    const index_t nb = std::min(kCols, b.cols() - j0);
    std::array<T*, kCols> x{};
    for (index_t jj = 0; jj < nb; ++jj) x[jj] = b.col(j0 + jj);
    for (index_t p = 0; p < m; ++p) {
      const T d = l.diagonal(p);
      std::array<T, kCols> s{};
      for (index_t jj = 0; jj < nb; ++jj) {
        if (!l.unit()) x[jj][p] /= d;
        s[jj] = x[jj][p];
      }
      const T* __restrict lp = l.base.col(p);
      if (nb == kCols) {
        T* __restrict x0 = x[0];
        T* __restrict x1 = x[1];
        T* __restrict x2 = x[2];
        T* __restrict x3 = x[3];
        for (index_t i = p + 1; i < m; ++i) {
          const T v = lp[i];
          x0[i] -= v * s[0];
          x1[i] -= v * s[1];
          x2[i] -= v * s[2];
          x3[i] -= v * s[3];
        }
      } else {
        for (index_t jj = 0; jj < nb; ++jj) {
          T* __restrict xj = x[jj];
          for (index_t i = p + 1; i < m; ++i) xj[i] -= lp[i] * s[jj];
        }
      }
    }
  }
}

/// B := L^{-H} B (Conj) or L^{-T} B (backward substitution, dot form).
template <class T, bool Conj>
void trsm_left_lower_t(TriangularView<T> l, MatrixView<T> b) {
  const index_t m = l.dim();
  auto cj = [](const T& v) { return Conj ? conj_of(v) : v; };
  for (index_t j = 0; j < b.cols(); ++j) {
    T* __restrict x = b.col(j);
    for (index_t i = m - 1; i >= 0; --i) {
      const T* __restrict li = l.base.col(i);
      T s = x[i];
      for (index_t p = i + 1; p < m; ++p) s -= cj(li[p]) * x[p];
      x[i] = l.unit() ? s : s / cj(li[i]);
    }
  }
}

/// B := L B (in place through a scratch column).
template <class T>
void trmm_left_lower_n(TriangularView<T> l, MatrixView<T> b) {
  const index_t m = l.dim();
  std::vector<T> acc(static_cast<std::size_t>(m));
  for (index_t j = 0; j < b.cols(); ++j) {
    T* x = b.col(j);
    std::fill(acc.begin(), acc.end(), T{});
    for (index_t p = 0; p < m; ++p) {
      const T s = x[p];
      const T* __restrict lp = l.base.col(p);
      acc[p] += l.diagonal(p) * s;
      T* __restrict ap = acc.data();
      for (index_t i = p + 1; i < m; ++i) ap[i] += lp[i] * s;
    }
    std::copy(acc.begin(), acc.end(), x);
  }
}

/// B := L^H B (Conj) or L^T B, ascending rows so inputs are still intact.
template <class T, bool Conj>
void trmm_left_lower_t(TriangularView<T> l, MatrixView<T> b) {
  const index_t m = l.dim();
  auto cj = [](const T& v) { return Conj ? conj_of(v) : v; };
  for (index_t j = 0; j < b.cols(); ++j) {
    T* __restrict x = b.col(j);
    for (index_t i = 0; i < m; ++i) {
      const T* __restrict li = l.base.col(i);
      T acc{};
      acc += cj(l.diagonal(i)) * x[i];
      for (index_t p = i + 1; p < m; ++p) acc += cj(li[p]) * x[p];
      x[i] = acc;
    }
  }
}

template <class T>
void trsm_left(Op op, TriangularView<T> l, MatrixView<T> b) {
  switch (op) {
    case Op::NoTrans: trsm_left_lower_n(l, b); break;
    case Op::Trans: trsm_left_lower_t<T, false>(l, b); break;
    case Op::ConjTrans: trsm_left_lower_t<T, true>(l, b); break;
  }
}

template <class T>
void trmm_left(Op op, TriangularView<T> l, MatrixView<T> b) {
  switch (op) {
    case Op::NoTrans: trmm_left_lower_n(l, b); break;
    case Op::Trans: trmm_left_lower_t<T, false>(l, b); break;
    case Op::ConjTrans: trmm_left_lower_t<T, true>(l, b); break;
  }
}

/// Right-side triangular ops are mapped onto left-side ones:
/// X op(L) = B  <=>  op(L)^H X^H = B^H (or the plain transpose for Trans).
template <class T, class LeftFn>
void via_adjoint(Op op, TriangularView<T> l, MatrixView<T> b, LeftFn&& left) {
  const Op pack_op = op == Op::Trans ? Op::Trans : Op::ConjTrans;
  DenseMatrix<T> bt = packed(pack_op, ConstMatrixView<T>(b));
  const Op left_op = op == Op::NoTrans ? Op::ConjTrans : Op::NoTrans;
  left(left_op, l, bt.view());
  unpack(pack_op, bt, b);
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// C := alpha*op(A)*op(B) + beta*C.  Flops 2mnk, class GEMM.
template <class T>
void gemm_update(Op op_a, Op op_b, Id<T> alpha, ConstMatrixView<Id<T>> a, ConstMatrixView<Id<T>> b,
                 Id<T> beta, MatrixView<T> c, const KernelContext& ctx = {}) {
  const Shape sa = detail::op_shape(op_a, a);
  const Shape sb = detail::op_shape(op_b, b);
  if (sa.rows != c.rows() || sb.cols != c.cols() || sa.cols != sb.rows) {
    throw InvalidArgument("gemm_update: op(A) " + detail::dims(sa.rows, sa.cols) + ", op(B) " +
                          detail::dims(sb.rows, sb.cols) + ", C " +
                          detail::dims(c.rows(), c.cols()));
  }
  const index_t k = sa.cols;
  if (c.empty() || (k == 0 && beta == Id<T>(1))) return;
  ctx.report(KernelClass::Gemm, 2 * detail::u64(c.rows()) * detail::u64(c.cols()) * detail::u64(k),
             {c.rows(), c.cols()}, {sa, sb});
  if (op_a == Op::NoTrans && op_b == Op::NoTrans) {
    detail::gemm_nn<T>(alpha, a, b, beta, c);
    return;
  }
  DenseMatrix<T> pa, pb;
  ConstMatrixView<T> va = a, vb = b;
  if (op_a != Op::NoTrans) {
    pa = detail::packed(op_a, a);
    va = pa.view();
  }
  if (op_b != Op::NoTrans) {
    pb = detail::packed(op_b, b);
    vb = pb.view();
  }
  detail::gemm_nn<T>(alpha, va, vb, beta, c);
}

/// C := alpha*H*B + beta*C (Left) or alpha*B*H + beta*C (Right) for H read
/// through its lower triangle. Flops 2 m^2 n with m the Hermitian dimension.
template <class T>
void hemm_update(Side side, Id<T> alpha, HermitianLowerView<const Id<T>> h, ConstMatrixView<Id<T>> b,
                 Id<T> beta, MatrixView<T> c, const KernelContext& ctx = {}) {
  const index_t hm = h.dim();
  const bool ok = side == Side::Left ? (b.rows() == hm && c.rows() == hm && c.cols() == b.cols())
                                     : (b.cols() == hm && c.cols() == hm && c.rows() == b.rows());
  if (!ok) {
    throw InvalidArgument("hemm_update: H " + detail::dims(hm, hm) + ", B " +
                          detail::dims(b.rows(), b.cols()) + ", C " +
                          detail::dims(c.rows(), c.cols()));
  }
  if (c.empty()) return;
  const index_t other = side == Side::Left ? b.cols() : b.rows();
  ctx.report(KernelClass::Hemm, 2 * detail::u64(hm) * detail::u64(hm) * detail::u64(other),
             {c.rows(), c.cols()}, {{hm, hm}, {b.rows(), b.cols()}});
  const DenseMatrix<T> full = materialize(h);
  if (side == Side::Left) {
    detail::gemm_nn<T>(alpha, full.view(), b, beta, c);
  } else {
    detail::gemm_nn<T>(alpha, b, full.view(), beta, c);
  }
}

/// Lower triangle of C := alpha*A*B^H + conj(alpha)*B*A^H + beta*C
/// (NoTrans, A and B n x k) or alpha*A^H*B + conj(alpha)*B^H*A + beta*C
/// (ConjTrans, A and B k x n). Flops 2 n^2 k. Strictly-upper C is untouched.
template <class T>
void her2k_update(Op trans, Id<T> alpha, ConstMatrixView<Id<T>> a, ConstMatrixView<Id<T>> b,
                  real_t<T> beta, MatrixView<T> c, const KernelContext& ctx = {}) {
  if (trans == Op::Trans) throw InvalidArgument("her2k_update: use NoTrans or ConjTrans");
  const Shape sa = detail::op_shape(trans, a);
  const Shape sb = detail::op_shape(trans, b);
  if (c.rows() != c.cols() || sa.rows != c.rows() || sb.rows != c.rows() || sa.cols != sb.cols) {
    throw InvalidArgument("her2k_update: A " + detail::dims(a.rows(), a.cols()) + ", B " +
                          detail::dims(b.rows(), b.cols()) + ", C " +
                          detail::dims(c.rows(), c.cols()));
  }
  if (c.empty() || (sa.cols == 0 && beta == 1)) return;
  const index_t n = c.rows();
  const index_t k = sa.cols;
  ctx.report(KernelClass::Her2k, 2 * detail::u64(n) * detail::u64(n) * detail::u64(k), {n, n},
             {{a.rows(), a.cols()}, {b.rows(), b.cols()}});
  if (trans == Op::NoTrans) {
    detail::her2k_lower_n<T>(alpha, a, b, beta, c);
  } else {
    const DenseMatrix<T> pa = detail::packed(Op::ConjTrans, a);
    const DenseMatrix<T> pb = detail::packed(Op::ConjTrans, b);
    detail::her2k_lower_n<T>(alpha, pa.view(), pb.view(), beta, c);
  }
}

/// Lower triangle of C := alpha*A*A^H + beta*C (NoTrans, A n x k) or
/// alpha*A^H*A + beta*C (ConjTrans, A k x n). Flops n^2 k.
template <class T>
void herk_update(Op trans, real_t<T> alpha, ConstMatrixView<Id<T>> a, real_t<T> beta,
                 MatrixView<T> c, const KernelContext& ctx = {}) {
  if (trans == Op::Trans) throw InvalidArgument("herk_update: use NoTrans or ConjTrans");
  const Shape sa = detail::op_shape(trans, a);
  if (c.rows() != c.cols() || sa.rows != c.rows()) {
    throw InvalidArgument("herk_update: A " + detail::dims(a.rows(), a.cols()) + ", C " +
                          detail::dims(c.rows(), c.cols()));
  }
  if (c.empty() || (sa.cols == 0 && beta == 1)) return;
  const index_t n = c.rows();
  ctx.report(KernelClass::Herk, detail::u64(n) * detail::u64(n) * detail::u64(sa.cols), {n, n},
             {{a.rows(), a.cols()}});
  if (trans == Op::NoTrans) {
    detail::herk_lower_n<T>(alpha, a, beta, c);
  } else {
    const DenseMatrix<T> pa = detail::packed(Op::ConjTrans, a);
    detail::herk_lower_n<T>(alpha, pa.view(), beta, c);
  }
}

/// B := op(L)^{-1} B (Left) or B op(L)^{-1} (Right). Flops m^2 r with m the
/// triangular dimension and r the number of right-hand sides.
template <class T>
void trsm_apply(Side side, Op op, TriangularView<Id<T>> l, MatrixView<T> b,
                const KernelContext& ctx = {}) {
  const index_t m = l.dim();
  if ((side == Side::Left ? b.rows() : b.cols()) != m) {
    throw InvalidArgument("trsm_apply: L " + detail::dims(m, m) + ", B " +
                          detail::dims(b.rows(), b.cols()));
  }
  detail::check_nonsingular(l);
  if (b.empty()) return;
  const index_t r = side == Side::Left ? b.cols() : b.rows();
  ctx.report(KernelClass::Trsm, detail::u64(m) * detail::u64(m) * detail::u64(r),
             {b.rows(), b.cols()}, {{m, m}});
  if (side == Side::Left) {
    detail::trsm_left(op, l, b);
  } else {
    detail::via_adjoint(op, l, b,
                        [](Op o, TriangularView<T> t, MatrixView<T> x) { detail::trsm_left(o, t, x); });
  }
}

/// B := op(L) B (Left) or B op(L) (Right). Flops m^2 r.
template <class T>
void trmm_apply(Side side, Op op, TriangularView<Id<T>> l, MatrixView<T> b,
                const KernelContext& ctx = {}) {
  const index_t m = l.dim();
  if ((side == Side::Left ? b.rows() : b.cols()) != m) {
    throw InvalidArgument("trmm_apply: L " + detail::dims(m, m) + ", B " +
                          detail::dims(b.rows(), b.cols()));
  }
  if (b.empty()) return;
  const index_t r = side == Side::Left ? b.cols() : b.rows();
  ctx.report(KernelClass::Trmm, detail::u64(m) * detail::u64(m) * detail::u64(r),
             {b.rows(), b.cols()}, {{m, m}});
  if (side == Side::Left) {
    detail::trmm_left(op, l, b);
  } else {
    detail::via_adjoint(op, l, b,
                        [](Op o, TriangularView<T> t, MatrixView<T> x) { detail::trmm_left(o, t, x); });
  }
}

/// Y := Y + alpha*X. Level-1; logged as OTHER with zero flops.
template <class T>
void axpy_update(Id<T> alpha, ConstMatrixView<Id<T>> x, MatrixView<T> y, const KernelContext& ctx = {}) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw InvalidArgument("axpy_update: X " + detail::dims(x.rows(), x.cols()) + ", Y " +
                          detail::dims(y.rows(), y.cols()));
  }
  if (y.empty()) return;
  ctx.report(KernelClass::Other, 0, {y.rows(), y.cols()}, {{x.rows(), x.cols()}});
  for (index_t j = 0; j < y.cols(); ++j) {
    const T* __restrict xs = x.col(j);
    T* __restrict ys = y.col(j);
    for (index_t i = 0; i < y.rows(); ++i) ys[i] += alpha * xs[i];
  }
}

inline std::uint64_t cholesky_flops(index_t n) {
  const double nn = static_cast<double>(n);
  return static_cast<std::uint64_t>(std::llround(nn * nn * nn / 3.0));
}

/// Cholesky factor L (lower, real positive diagonal) with L L^H = B.
/// Throws NotPositiveDefinite naming the first failing pivot.
template <class T>
TriangularFactor<T> cholesky_lower(HermitianLowerView<const T> b, const KernelContext& ctx = {}) {
  const index_t n = b.dim();
  TriangularFactor<T> out{DenseMatrix<T>(n, n), Diag::NonUnit};
  DenseMatrix<T>& l = out.base;
  for (index_t j = 0; j < n; ++j)
    for (index_t i = j; i < n; ++i) l(i, j) = b.base(i, j);
  for (index_t j = 0; j < n; ++j) {
    const double d = real_of(l(j, j));
    if (!(d > 0.0)) throw NotPositiveDefinite(j);
    const double ljj = std::sqrt(d);
    l(j, j) = T(ljj);
    T* col = l.data() + j * n;
    for (index_t i = j + 1; i < n; ++i) col[i] /= ljj;
    for (index_t c = j + 1; c < n; ++c) {
      const T s = conj_of(col[c]);
      T* __restrict lc = l.data() + c * n;
      for (index_t i = c; i < n; ++i) lc[i] -= col[i] * s;
    }
  }
  if (n > 0) ctx.report(KernelClass::Chol, cholesky_flops(n), {n, n}, {{n, n}});
  return out;
}

}  // namespace twosided
