#pragma once

// Blocked two-sided triangular product, A := L^H A L, on the lower triangle.
//
//   MV1  TL = L_TL^H Ahat_TL L_TL,  BL = Ahat_BL,        BR = Ahat_BR
//   MV2  TL = L_TL^H Ahat_TL L_TL,  BL = Ahat_BL L_TL,   BR = Ahat_BR
//
// MV1 is the panel algorithm with a large trmm against L00 every iteration.
// MV2 keeps BL post-multiplied by L_TL, which turns that trmm into a gemm
// update of A20 by the current column panel.

#include "twosided/two_sided_trsm.hpp"

namespace twosided {

namespace detail {

/// Unblocked A := L^H A L, one row of the finished part at a time.
template <class T>
void two_sided_trmm_base(MatrixView<T> a, TriangularView<T> l) {
  const index_t n = a.rows();
  for (index_t k = 0; k < n; ++k) {
    const T lam = l.diagonal(k);
    const double alpha = real_of(a(k, k));
    // a10 := a10 L00
    for (index_t j = 0; j < k; ++j) {
      T s{};
      for (index_t p = j; p < k; ++p) s += a(k, p) * l.at(p, j);
      a(k, j) = s;
    }
    const T half = T(0.5 * alpha);
    for (index_t j = 0; j < k; ++j) a(k, j) += half * l.base(k, j);
    // A00 += a10^H l10 + l10^H a10
    for (index_t j = 0; j < k; ++j) {
      const T aj = a(k, j);
      const T lj = l.base(k, j);
      for (index_t i = j; i < k; ++i) a(i, j) += conj_of(a(k, i)) * lj + conj_of(l.base(k, i)) * aj;
      if constexpr (is_complex_v<T>) a(j, j) = T(a(j, j).real());
    }
    for (index_t j = 0; j < k; ++j) a(k, j) += half * l.base(k, j);
    const T clam = conj_of(lam);
    for (index_t j = 0; j < k; ++j) a(k, j) = clam * a(k, j);
    a(k, k) = T(abs2(lam) * alpha);
  }
}

template <class T>
void trmm_base_step(const TrsmStep<T>& s) {
  if (!s.a.a11.empty()) s.ctx.report(KernelClass::TwoSidedBase, cube(s.kb), {s.kb, s.kb}, {{s.kb, s.kb}});
  two_sided_trmm_base(s.a.a11, s.l11);
}

template <class T>
void trmm_mv1(const TrsmStep<T>& s) {
  const KernelContext& c = s.ctx;
  if (s.run(1)) trmm_apply<T>(Side::Right, Op::NoTrans, s.l00, s.a.a10, c);
  if (s.run(2)) hemm_update<T>(Side::Left, T(0.5), hermitian_lower(s.a.a11), s.l.a10, T(1), s.a.a10, c);
  if (s.run(3)) her2k_update<T>(Op::ConjTrans, T(1), s.a.a10, s.l.a10, 1.0, s.a.a00, c);
  if (s.run(4)) hemm_update<T>(Side::Left, T(0.5), hermitian_lower(s.a.a11), s.l.a10, T(1), s.a.a10, c);
  if (s.run(5)) trmm_apply<T>(Side::Left, Op::ConjTrans, s.l11, s.a.a10, c);
  if (s.run(6)) trmm_base_step(s);
}

template <class T>
void trmm_mv2(const TrsmStep<T>& s) {
  const KernelContext& c = s.ctx;
  if (s.run(1)) hemm_update<T>(Side::Left, T(0.5), hermitian_lower(s.a.a11), s.l.a10, T(1), s.a.a10, c);
  if (s.run(2)) her2k_update<T>(Op::ConjTrans, T(1), s.a.a10, s.l.a10, 1.0, s.a.a00, c);
  if (s.run(3)) hemm_update<T>(Side::Left, T(0.5), hermitian_lower(s.a.a11), s.l.a10, T(1), s.a.a10, c);
  if (s.run(4)) trmm_apply<T>(Side::Left, Op::ConjTrans, s.l11, s.a.a10, c);
  if (s.run(5)) gemm_update<T>(Op::NoTrans, Op::NoTrans, T(1), s.a.a21, s.l.a10, T(1), s.a.a20, c);
  if (s.run(6)) trmm_apply<T>(Side::Right, Op::NoTrans, s.l11, s.a.a21, c);
  if (s.run(7)) trmm_base_step(s);
}

}  // namespace detail

/// Unblocked A := L^H A L on the lower triangle; n^3 flops as TWO_SIDED_BASE.
template <class T>
void two_sided_trmm_unblocked(HermitianLowerView<T> a, TriangularView<Id<T>> l,
                              const KernelContext& ctx = {}) {
  const index_t n = a.dim();
  detail::check_two_sided_operands(n, l);
  if (n == 0) return;
  ctx.report(KernelClass::TwoSidedBase, detail::cube(n), {n, n}, {{n, n}});
  detail::two_sided_trmm_base(a.base, l);
}

template <class T>
RunInfo two_sided_trmm(HermitianLowerView<T> a, TriangularView<Id<T>> l, TrmmVariant variant,
                       index_t b, const RunOptions<T>& opts = {}) {
  const index_t n = a.dim();
  if (b < 1) throw InvalidArgument("block size must be at least 1");
  detail::check_two_sided_operands(n, l);

  RunInfo info;
  MatrixView<T> am = a.base;
  auto notify = [&](index_t k) {
    ++info.boundaries;
    if (opts.hook) opts.hook(BoundaryState<T>{k, am, {}, false});
  };
  notify(0);
  for (const auto& [k, kb] : partition_schedule(n, b)) {
    const detail::TrsmStep<T> step{
        repartition(am, k, kb), repartition(l.base, k, kb), l.sub(0, k), l.sub(k, kb),
        l.sub(k + kb, n - k - kb), k, kb, n - k - kb, opts.ctx, opts.skip_step};
    switch (variant) {
      case TrmmVariant::MV1: detail::trmm_mv1(step); break;
      case TrmmVariant::MV2: detail::trmm_mv2(step); break;
    }
    notify(k + kb);
  }
  return info;
}

}  // namespace twosided
