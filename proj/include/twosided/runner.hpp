#pragma once

// One entry point for every (operation, variant) pair, used by the CLI and
// the test suites.

#include "twosided/oracle.hpp"
#include "twosided/random.hpp"
#include "twosided/two_sided_trmm.hpp"
#include "twosided/two_sided_trsm.hpp"

namespace twosided {

/// Runs a trsm or trmm variant in place. Reduce variants run the trsm
/// variant of the same number; the Cholesky step belongs to the caller.
template <class T>
RunInfo run_variant(VariantId v, HermitianLowerView<T> a, TriangularView<Id<T>> l, index_t b,
                    const RunOptions<T>& opts = {}) {
  if (v.op == Operation::Trmm) return two_sided_trmm<T>(a, l, v.trmm(), b, opts);
  return two_sided_trsm<T>(a, l, v.trsm(), b, opts);
}

/// The oracle matching run_variant.
template <class T>
DenseMatrix<T> oracle_for(VariantId v, HermitianLowerView<const T> a_hat, TriangularView<T> l) {
  if (v.op == Operation::Trmm) return oracle::two_sided_trmm<T>(a_hat, l);
  return oracle::two_sided_trsm<T>(a_hat, l);
}

/// Deterministic operands for a seeded problem of order n: A from `seed`,
/// the factor from `paired_seed(seed)`. For reduce the factor is the
/// Cholesky factor of `random_hpd(n, paired_seed(seed))`, returned in `b`.
template <class T>
struct Problem {
  DenseMatrix<T> a;
  DenseMatrix<T> b;
  TriangularFactor<T> l;
};

template <class T>
Problem<T> make_problem(Operation op, index_t n, std::uint64_t seed) {
  Problem<T> p;
  p.a = random_hermitian<T>(n, seed);
  if (op == Operation::Reduce) {
    p.b = random_hpd<T>(n, paired_seed(seed));
    p.l = cholesky_lower<T>(hermitian_lower(std::as_const(p.b)));
  } else {
    p.l = random_well_conditioned_lower<T>(n, paired_seed(seed));
  }
  return p;
}

}  // namespace twosided
