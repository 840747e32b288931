#pragma once

#include <cstdint>
#include <random>

#include "twosided/matrix.hpp"

namespace twosided {

/// Seeded generator behind every random test matrix.
///
/// The engine is `std::mt19937_64`, whose output sequence is fixed by the
/// standard. Uniform reals are formed from the top 53 bits of each draw,
/// `u = (x >> 11) * 2^-53`, then mapped affinely onto [lo, hi]; this avoids
/// `std::uniform_real_distribution`, whose algorithm is library-specific.
class MatrixRng {
 public:
  explicit MatrixRng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  /// Real: one draw. Complex: real part drawn first, then imaginary.
  template <class T>
  T scalar(double lo, double hi) {
    if constexpr (is_complex_v<T>) {
      const double re = uniform(lo, hi);
      const double im = uniform(lo, hi);
      return T(re, im);
    } else {
      return uniform(lo, hi);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// m x n matrix with entries uniform in [lo, hi], filled column by column.
template <class T>
DenseMatrix<T> random_matrix(index_t m, index_t n, std::uint64_t seed, double lo = -1.0,
                             double hi = 1.0) {
  MatrixRng rng(seed);
  DenseMatrix<T> out(m, n);
  for (index_t j = 0; j < n; ++j)
    for (index_t i = 0; i < m; ++i) out(i, j) = rng.scalar<T>(lo, hi);
  return out;
}

/// (M + M^H) / 2 for M uniform in [-1, 1]; both triangles are stored.
template <class T>
DenseMatrix<T> random_hermitian(index_t n, std::uint64_t seed) {
  const DenseMatrix<T> m = random_matrix<T>(n, n, seed);
  DenseMatrix<T> out(n, n);
  for (index_t j = 0; j < n; ++j)
    for (index_t i = 0; i < n; ++i) out(i, j) = (m(i, j) + conj_of(m(j, i))) * 0.5;
  for (index_t i = 0; i < n; ++i) out(i, i) = T(real_of(out(i, i)));
  return out;
}

/// Lower-triangular factor with strictly-lower entries uniform in
/// [-0.5, 0.5] and a real diagonal uniform in [1, 2]. Upper part is zero.
template <class T>
TriangularFactor<T> random_well_conditioned_lower(index_t n, std::uint64_t seed) {
  MatrixRng rng(seed);
  TriangularFactor<T> out{DenseMatrix<T>(n, n), Diag::NonUnit};
  for (index_t j = 0; j < n; ++j) {
    out.base(j, j) = T(rng.uniform(1.0, 2.0));
    for (index_t i = j + 1; i < n; ++i) out.base(i, j) = rng.scalar<T>(-0.5, 0.5);
  }
  return out;
}

/// M M^H + n I with M uniform in [-1, 1]; Hermitian positive definite.
template <class T>
DenseMatrix<T> random_hpd(index_t n, std::uint64_t seed) {
  const DenseMatrix<T> m = random_matrix<T>(n, n, seed);
  DenseMatrix<T> out(n, n);
  for (index_t j = 0; j < n; ++j) {
    for (index_t i = j; i < n; ++i) {
      T s{};
      for (index_t l = 0; l < n; ++l) s += m(i, l) * conj_of(m(j, l));
      out(i, j) = s;
      out(j, i) = conj_of(s);
    }
    out(j, j) = T(real_of(out(j, j)) + static_cast<double>(n));
  }
  return out;
}

/// Seed for the factor paired with an operand drawn from `seed`, so one
/// user-facing seed fixes a whole (A, L) or (A, B) problem.
inline std::uint64_t paired_seed(std::uint64_t seed) { return seed ^ 0x9e3779b97f4a7c15ULL; }

}  // namespace twosided
