#pragma once

// Reduction of A x = lambda B x to standard form: B = L L^H, then
// C = L^{-1} A L^{-H}. Eigenvectors z of C map back through x = L^{-H} z.

#include <cmath>
#include <utility>

#include "twosided/oracle.hpp"
#include "twosided/two_sided_trsm.hpp"

namespace twosided {

template <class T>
struct ReductionResult {
  /// Lower triangle holds C; the strictly-upper part is A's original content.
  DenseMatrix<T> c;
  TriangularFactor<T> l;
  /// ||L C L^H - Ahat||_F / ||Ahat||_F.
  double residual = 0.0;
  FlopLedger ledger;
  RunInfo info;
};

/// ||L C L^H - Ahat||_F / ||Ahat||_F on materialized full matrices.
template <class T>
double reconstruction_residual(HermitianLowerView<const T> a_hat, HermitianLowerView<const T> c,
                               TriangularView<T> l) {
  const DenseMatrix<T> full_c = materialize(c);
  const DenseMatrix<T> full_l = materialize(l);
  const DenseMatrix<T> lc = oracle::multiply<T>(full_l.cview(), Op::NoTrans, full_c.cview(), Op::NoTrans);
  const DenseMatrix<T> rec = oracle::multiply<T>(lc.cview(), Op::NoTrans, full_l.cview(), Op::ConjTrans);
  const DenseMatrix<T> full_a = materialize(a_hat);
  return relative_distance<T>(rec.cview(), full_a.cview());
}

/// Throws NotPositiveDefinite (with the failing pivot) when B is not HPD.
template <class T>
ReductionResult<T> reduce(HermitianLowerView<const T> a, HermitianLowerView<const T> b, TrsmVariant variant,
                          index_t block_size, RunOptions<T> opts = {}) {
  if (a.dim() != b.dim())
    throw InvalidArgument("reduce: A is " + detail::dims(a.dim(), a.dim()) + " but B is " +
                          detail::dims(b.dim(), b.dim()));
  if (block_size < 1) throw InvalidArgument("block size must be at least 1");
  ReductionResult<T> r;
  FlopLedger* outer = opts.ctx.ledger;
  opts.ctx.ledger = &r.ledger;
  r.l = cholesky_lower<T>(b, opts.ctx);
  r.c = DenseMatrix<T>::copy_of(a.base);
  r.info = two_sided_trsm<T>(hermitian_lower(r.c), r.l.view(), variant, block_size, opts);
  if (outer != nullptr) *outer += r.ledger;
  r.residual = reconstruction_residual<T>(a, hermitian_lower(std::as_const(r.c)), r.l.view());
  return r;
}

/// x = L^{-H} z for every column of z, by one left conj-transpose trsm.
template <class T>
DenseMatrix<T> recover_generalized_eigenvector(ConstMatrixView<T> z, TriangularView<T> l,
                                               const KernelContext& ctx = {}) {
  DenseMatrix<T> x = DenseMatrix<T>::copy_of(z);
  trsm_apply<T>(Side::Left, Op::ConjTrans, l, x.view(), ctx);
  return x;
}

/// Ascending eigenvalues of a 2x2 Hermitian C from its trace and
/// discriminant.
template <class T>
std::pair<double, double> eigenvalues_2x2(HermitianLowerView<const T> c) {
  if (c.dim() != 2) throw InvalidArgument("eigenvalues_2x2: 2x2 operand required");
  const double p = real_of(c.base(0, 0));
  const double q = real_of(c.base(1, 1));
  const double mid = 0.5 * (p + q);
  const double half = 0.5 * (p - q);
  const double rad = std::hypot(half, std::sqrt(abs2(c.base(1, 0))));
  return {mid - rad, mid + rad};
}

}  // namespace twosided
