#pragma once

// Blocked two-sided triangular solve, A := L^{-1} A L^{-H}, on the lower
// triangle of A. Each variant maintains one loop invariant over the 2x2
// partitioning (TL finished, BL and BR in a variant-specific state):
//
//   V1  BL = Ahat_BL                      BR = Ahat_BR
//   V2  BL = Ahat_BL L_TL^{-H}            BR = Ahat_BR
//   V3  BL = Ahat_BL L_TL^{-H} - Y_BL/2   BR = Ahat_BR,  Y_BL = L_BL C_TL stored
//   V4  BL = L_BR C_BL                    BR = Ahat_BR - (L_BL W^H + W L_BL^H)
//   V5  BL = C_BL                         BR = Ahat_BR - (L_BL W^H + W L_BL^H)
//
// with W = L_BL C_TL / 2 + L_BR C_BL. The strictly-upper part of A is never
// read or written.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "twosided/kernels.hpp"
#include "twosided/variants.hpp"

namespace twosided {

namespace detail {

/// In-place unblocked solve: for each column, scale the pivot, halve-update
/// the column below it, rank-2 update the trailing matrix, then forward
/// substitute with the trailing factor.
template <class T>
void two_sided_trsm_base(MatrixView<T> a, TriangularView<T> l) {
  const index_t n = a.rows();
  for (index_t k = 0; k < n; ++k) {
    const T lam = l.diagonal(k);
    const double alpha = real_of(a(k, k)) / abs2(lam);
    a(k, k) = T(alpha);
    const index_t m = n - k - 1;
    if (m == 0) continue;
    T* __restrict a21 = a.col(k) + k + 1;
    const T* __restrict l21 = l.base.col(k) + k + 1;
    const T clam = conj_of(lam);
    for (index_t i = 0; i < m; ++i) a21[i] /= clam;
    const T half = T(-0.5 * alpha);
    for (index_t i = 0; i < m; ++i) a21[i] += half * l21[i];
    for (index_t j = 0; j < m; ++j) {
      const T s1 = conj_of(l21[j]);
      const T s2 = conj_of(a21[j]);
      T* __restrict cj = a.col(k + 1 + j) + k + 1;
      for (index_t i = j; i < m; ++i) cj[i] -= a21[i] * s1 + l21[i] * s2;
      if constexpr (is_complex_v<T>) cj[j] = T(cj[j].real());
    }
    for (index_t i = 0; i < m; ++i) a21[i] += half * l21[i];
    for (index_t p = 0; p < m; ++p) {
      a21[p] /= l.diagonal(k + 1 + p);
      const T s = a21[p];
      const T* __restrict lp = l.base.col(k + 1 + p) + k + 1;
      for (index_t i = p + 1; i < m; ++i) a21[i] -= lp[i] * s;
    }
  }
}

inline std::uint64_t cube(index_t n) {
  const auto u = static_cast<std::uint64_t>(n);
  return u * u * u;
}

/// Storage for Y_BL = L_BL C_TL. At boundary k the panel is (n-k) x k,
/// column-major with leading dimension n-k. Advancing drops the top kb rows
/// (compacting in place) and appends kb zeroed columns; capacity grows
/// geometrically up to the largest footprint the schedule needs.
template <class T>
class YPanel {
 public:
  YPanel(index_t n, index_t b) : rows_(n) {
    for (const auto& [k, kb] : partition_schedule(n, b)) {
      const index_t k2 = k + kb;
      bound_ = std::max(bound_, static_cast<std::size_t>((n - k2) * k2));
    }
  }

  MatrixView<T> view() { return MatrixView<T>(buf_.data(), rows_, cols_, rows_); }

  void advance(index_t kb) {
    const index_t new_rows = rows_ - kb;
    const index_t new_cols = cols_ + kb;
    const auto need = static_cast<std::size_t>(new_rows * new_cols);
    if (need > buf_.size()) {
      if (need > buf_.capacity()) {
        std::size_t cap = std::max(need, 2 * buf_.capacity());
        cap = std::min(cap, std::max(bound_, need));
        buf_.reserve(cap);
      }
      buf_.resize(need);
    }
    high_water_ = std::max(high_water_, buf_.capacity());
    T* p = buf_.data();
    for (index_t j = 0; j < cols_; ++j)
      for (index_t i = 0; i < new_rows; ++i) p[j * new_rows + i] = p[j * rows_ + kb + i];
    std::fill(p + cols_ * new_rows, p + new_cols * new_rows, T{});
    rows_ = new_rows;
    cols_ = new_cols;
  }

  std::size_t high_water() const { return high_water_; }

 private:
  std::vector<T> buf_;
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::size_t bound_ = 0;
  std::size_t high_water_ = 0;
};

template <class T>
struct TrsmStep {
  Repartition<T> a;
  Repartition<const T> l;
  TriangularView<T> l00, l11, l22;
  index_t k, kb, m2;
  const KernelContext& ctx;
  int skip;

  bool run(int step) const { return step != skip; }
};

template <class T>
void base_step(const TrsmStep<T>& s) {
  if (!s.a.a11.empty()) s.ctx.report(KernelClass::TwoSidedBase, cube(s.kb), {s.kb, s.kb}, {{s.kb, s.kb}});
  two_sided_trsm_base(s.a.a11, s.l11);
}

template <class T>
void trsm_v1(const TrsmStep<T>& s, MatrixView<T> scratch) {
  const KernelContext& c = s.ctx;
  MatrixView<T> y10(scratch.data(), s.kb, s.k, s.kb);
  for (index_t j = 0; j < s.k; ++j) std::fill_n(y10.col(j), s.kb, T{});
  if (s.run(1)) trsm_apply<T>(Side::Right, Op::ConjTrans, s.l00, s.a.a10, c);
  if (s.run(2)) hemm_update<T>(Side::Right, T(1), hermitian_lower(s.a.a00), s.l.a10, T(0), y10, c);
  if (s.run(3)) axpy_update<T>(T(-0.5), y10, s.a.a10, c);
  if (s.run(4)) her2k_update<T>(Op::NoTrans, T(-1), s.a.a10, s.l.a10, 1.0, s.a.a11, c);
  if (s.run(5)) axpy_update<T>(T(-0.5), y10, s.a.a10, c);
  if (s.run(6)) trsm_apply<T>(Side::Left, Op::NoTrans, s.l11, s.a.a10, c);
  if (s.run(7)) base_step(s);
}

template <class T>
void trsm_v2(const TrsmStep<T>& s, MatrixView<T> scratch) {
  const KernelContext& c = s.ctx;
  MatrixView<T> y10(scratch.data(), s.kb, s.k, s.kb);
  for (index_t j = 0; j < s.k; ++j) std::fill_n(y10.col(j), s.kb, T{});
  if (s.run(1)) hemm_update<T>(Side::Right, T(1), hermitian_lower(s.a.a00), s.l.a10, T(0), y10, c);
  if (s.run(2)) axpy_update<T>(T(-0.5), y10, s.a.a10, c);
  if (s.run(3)) her2k_update<T>(Op::NoTrans, T(-1), s.a.a10, s.l.a10, 1.0, s.a.a11, c);
  if (s.run(4)) axpy_update<T>(T(-0.5), y10, s.a.a10, c);
  if (s.run(5)) trsm_apply<T>(Side::Left, Op::NoTrans, s.l11, s.a.a10, c);
  if (s.run(6)) base_step(s);
  if (s.run(7)) gemm_update<T>(Op::NoTrans, Op::ConjTrans, T(-1), s.a.a20, s.l.a10, T(1), s.a.a21, c);
  if (s.run(8)) trsm_apply<T>(Side::Right, Op::ConjTrans, s.l11, s.a.a21, c);
}

template <class T>
void trsm_v3(const TrsmStep<T>& s, YPanel<T>& y) {
  const KernelContext& c = s.ctx;
  MatrixView<T> yv = y.view();
  MatrixView<T> y10 = yv.block(0, 0, s.kb, s.k);
  MatrixView<T> y20 = yv.block(s.kb, 0, s.m2, s.k);
  // A10 already holds the rank-2k operand W10 = Ahat10 L00^{-H} - Y10/2.
  if (s.run(1)) her2k_update<T>(Op::NoTrans, T(-1), s.a.a10, s.l.a10, 1.0, s.a.a11, c);
  if (s.run(2)) axpy_update<T>(T(-0.5), y10, s.a.a10, c);
  if (s.run(3)) trsm_apply<T>(Side::Left, Op::NoTrans, s.l11, s.a.a10, c);
  if (s.run(4)) base_step(s);
  if (s.run(5)) axpy_update<T>(T(0.5), y20, s.a.a20, c);
  if (s.run(6)) gemm_update<T>(Op::NoTrans, Op::ConjTrans, T(-1), s.a.a20, s.l.a10, T(1), s.a.a21, c);
  if (s.run(7)) trsm_apply<T>(Side::Right, Op::ConjTrans, s.l11, s.a.a21, c);
  if (s.run(8)) gemm_update<T>(Op::NoTrans, Op::NoTrans, T(1), s.l.a21, s.a.a10, T(1), y20, c);
  y.advance(s.kb);
  yv = y.view();
  MatrixView<T> y20n = yv.block(0, 0, s.m2, s.k);
  MatrixView<T> y21 = yv.block(0, s.k, s.m2, s.kb);
  if (s.run(9)) gemm_update<T>(Op::NoTrans, Op::ConjTrans, T(1), s.l.a20, s.a.a10, T(0), y21, c);
  if (s.run(10)) hemm_update<T>(Side::Right, T(1), hermitian_lower(s.a.a11), s.l.a21, T(1), y21, c);
  if (s.run(11)) axpy_update<T>(T(-0.5), y20n, s.a.a20, c);
  if (s.run(12)) axpy_update<T>(T(-0.5), y21, s.a.a21, c);
}

template <class T>
void trsm_v4(const TrsmStep<T>& s, MatrixView<T> scratch) {
  const KernelContext& c = s.ctx;
  MatrixView<T> w21(scratch.data(), s.m2, s.kb, std::max<index_t>(s.m2, 1));
  for (index_t j = 0; j < s.kb; ++j) std::fill_n(w21.col(j), s.m2, T{});
  if (s.run(1)) trsm_apply<T>(Side::Left, Op::NoTrans, s.l11, s.a.a10, c);
  if (s.run(2)) base_step(s);
  if (s.run(3)) gemm_update<T>(Op::NoTrans, Op::NoTrans, T(-1), s.l.a21, s.a.a10, T(1), s.a.a20, c);
  if (s.run(4)) trsm_apply<T>(Side::Right, Op::ConjTrans, s.l11, s.a.a21, c);
  if (s.run(5)) hemm_update<T>(Side::Right, T(1), hermitian_lower(s.a.a11), s.l.a21, T(0), w21, c);
  if (s.run(6)) axpy_update<T>(T(-0.5), w21, s.a.a21, c);
  if (s.run(7)) her2k_update<T>(Op::NoTrans, T(-1), s.a.a21, s.l.a21, 1.0, s.a.a22, c);
  if (s.run(8)) axpy_update<T>(T(-0.5), w21, s.a.a21, c);
}

template <class T>
void trsm_v5(const TrsmStep<T>& s, MatrixView<T> scratch) {
  const KernelContext& c = s.ctx;
  MatrixView<T> w21(scratch.data(), s.m2, s.kb, std::max<index_t>(s.m2, 1));
  for (index_t j = 0; j < s.kb; ++j) std::fill_n(w21.col(j), s.m2, T{});
  if (s.run(1)) base_step(s);
  if (s.run(2)) trsm_apply<T>(Side::Right, Op::ConjTrans, s.l11, s.a.a21, c);
  if (s.run(3)) hemm_update<T>(Side::Right, T(1), hermitian_lower(s.a.a11), s.l.a21, T(0), w21, c);
  if (s.run(4)) axpy_update<T>(T(-0.5), w21, s.a.a21, c);
  if (s.run(5)) her2k_update<T>(Op::NoTrans, T(-1), s.a.a21, s.l.a21, 1.0, s.a.a22, c);
  if (s.run(6)) axpy_update<T>(T(-0.5), w21, s.a.a21, c);
  if (s.run(7)) trsm_apply<T>(Side::Left, Op::NoTrans, s.l22, s.a.a21, c);
}

template <class T>
void check_two_sided_operands(index_t n, TriangularView<T> l) {
  if (l.dim() != n) {
    throw InvalidArgument("two-sided operation: A is " + dims(n, n) + " but L is " +
                          dims(l.dim(), l.dim()));
  }
}

}  // namespace detail

/// Unblocked A := L^{-1} A L^{-H} on the lower triangle; counts n^3 flops as
/// TWO_SIDED_BASE.
template <class T>
void two_sided_trsm_unblocked(HermitianLowerView<T> a, TriangularView<Id<T>> l,
                              const KernelContext& ctx = {}) {
  const index_t n = a.dim();
  detail::check_two_sided_operands(n, l);
  detail::check_nonsingular(l);
  if (n == 0) return;
  ctx.report(KernelClass::TwoSidedBase, detail::cube(n), {n, n}, {{n, n}});
  detail::two_sided_trsm_base(a.base, l);
}

/// Blocked A := L^{-1} A L^{-H} with the chosen variant and block size.
/// `b > n` is legal and runs a single unblocked step.
template <class T>
RunInfo two_sided_trsm(HermitianLowerView<T> a, TriangularView<Id<T>> l, TrsmVariant variant,
                       index_t b, const RunOptions<T>& opts = {}) {
  const index_t n = a.dim();
  if (b < 1) throw InvalidArgument("block size must be at least 1");
  detail::check_two_sided_operands(n, l);
  detail::check_nonsingular(l);

  RunInfo info;
  MatrixView<T> am = a.base;
  auto notify = [&](index_t k, detail::YPanel<T>* y) {
    ++info.boundaries;
    if (!opts.hook) return;
    BoundaryState<T> st{k, am, {}, false};
    if (y != nullptr) {
      st.y = y->view();
      st.has_y = true;
    }
    opts.hook(st);
  };

  const index_t bw = std::min(b, std::max<index_t>(n, 1));
  std::vector<T> scratch;
  if (variant != TrsmVariant::V3) scratch.assign(static_cast<std::size_t>(bw * n), T{});
  info.scratch_scalars = scratch.size();
  detail::YPanel<T> y(n, b);
  detail::YPanel<T>* yp = variant == TrsmVariant::V3 ? &y : nullptr;
  MatrixView<T> sv(scratch.data(), bw, n, bw);

  notify(0, yp);
  for (const auto& [k, kb] : partition_schedule(n, b)) {
    const detail::TrsmStep<T> step{
        repartition(am, k, kb), repartition(l.base, k, kb), l.sub(0, k), l.sub(k, kb),
        l.sub(k + kb, n - k - kb), k, kb, n - k - kb, opts.ctx, opts.skip_step};
    switch (variant) {
      case TrsmVariant::V1: detail::trsm_v1(step, sv); break;
      case TrsmVariant::V2: detail::trsm_v2(step, sv); break;
      case TrsmVariant::V3: detail::trsm_v3(step, y); break;
      case TrsmVariant::V4: detail::trsm_v4(step, sv); break;
      case TrsmVariant::V5: detail::trsm_v5(step, sv); break;
    }
    notify(k + kb, yp);
  }
  info.y_high_water = y.high_water();
  return info;
}

}  // namespace twosided
