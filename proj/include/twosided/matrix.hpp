#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <initializer_list>
#include <string>
#include <vector>

#include "twosided/types.hpp"

namespace twosided {

/// Non-owning column-major window with an explicit leading dimension.
///
/// A view never outlives the storage it was taken from. `MatrixView<const T>`
/// is the read-only flavour; a mutable view converts to it implicitly.
template <class T>
class MatrixView {
 public:
  using value_type = std::remove_cv_t<T>;

  MatrixView() = default;
  MatrixView(T* data, index_t rows, index_t cols, index_t ld)
      : data_(data), rows_(rows), cols_(cols), ld_(std::max<index_t>(ld, 1)) {}

  template <class U>
    requires(std::is_same_v<const U, T> && !std::is_same_v<U, T>)
  MatrixView(const MatrixView<U>& other)  // NOLINT(google-explicit-constructor)
      : data_(other.data()), rows_(other.rows()), cols_(other.cols()), ld_(other.ld()) {}

  index_t rows() const noexcept { return rows_; }
  index_t cols() const noexcept { return cols_; }
  index_t ld() const noexcept { return ld_; }
  T* data() const noexcept { return data_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  T& operator()(index_t i, index_t j) const { return data_[i + j * ld_]; }
  T* col(index_t j) const { return data_ + j * ld_; }

  /// Sub-window of `m x n` elements starting at (i, j).
  MatrixView block(index_t i, index_t j, index_t m, index_t n) const {
    if (i < 0 || j < 0 || m < 0 || n < 0 || i + m > rows_ || j + n > cols_) {
      throw InvalidArgument("block (" + std::to_string(i) + "," + std::to_string(j) + ") of size " +
                            std::to_string(m) + "x" + std::to_string(n) + " exceeds " +
                            std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    if (m == 0 || n == 0) return MatrixView(data_, m, n, ld_);
    return MatrixView(data_ + i + j * ld_, m, n, ld_);
  }

 private:
  T* data_ = nullptr;
  index_t rows_ = 0;
  index_t cols_ = 0;
  index_t ld_ = 1;
};

template <class T>
using ConstMatrixView = MatrixView<const T>;

/// Owning column-major matrix, leading dimension equal to the row count.
template <class T>
class DenseMatrix {
 public:
  using value_type = T;

  DenseMatrix() = default;
  DenseMatrix(index_t rows, index_t cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw InvalidArgument("negative matrix dimension");
    data_.assign(static_cast<std::size_t>(rows * cols), T{});
  }

  /// Row-wise literal, e.g. `DenseMatrix<double>::from_rows({{1, 2}, {3, 4}})`.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    const auto m = static_cast<index_t>(rows.size());
    const index_t n = m == 0 ? 0 : static_cast<index_t>(rows.begin()->size());
    DenseMatrix out(m, n);
    index_t i = 0;
    for (const auto& r : rows) {
      if (static_cast<index_t>(r.size()) != n) throw InvalidArgument("ragged row literal");
      index_t j = 0;
      for (const auto& v : r) out(i, j++) = v;
      ++i;
    }
    return out;
  }

  static DenseMatrix identity(index_t n) {
    DenseMatrix out(n, n);
    for (index_t i = 0; i < n; ++i) out(i, i) = T(1);
    return out;
  }

  static DenseMatrix copy_of(ConstMatrixView<T> v) {
    DenseMatrix out(v.rows(), v.cols());
    for (index_t j = 0; j < v.cols(); ++j) {
      std::copy_n(v.col(j), v.rows(), out.data_.data() + j * out.rows_);
    }
    return out;
  }

  index_t rows() const noexcept { return rows_; }
  index_t cols() const noexcept { return cols_; }
  index_t ld() const noexcept { return std::max<index_t>(rows_, 1); }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  T& operator()(index_t i, index_t j) { return data_[i + j * rows_]; }
  const T& operator()(index_t i, index_t j) const { return data_[i + j * rows_]; }

  MatrixView<T> view() { return MatrixView<T>(data_.data(), rows_, cols_, ld()); }
  ConstMatrixView<T> view() const { return ConstMatrixView<T>(data_.data(), rows_, cols_, ld()); }
  ConstMatrixView<T> cview() const { return view(); }

  MatrixView<T> block(index_t i, index_t j, index_t m, index_t n) { return view().block(i, j, m, n); }
  ConstMatrixView<T> block(index_t i, index_t j, index_t m, index_t n) const {
    return view().block(i, j, m, n);
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<T> data_;
};

/// Square matrix of which only the lower triangle (diagonal included) is
/// significant. The diagonal's imaginary part is ignored.
template <class T>
struct HermitianLowerView {
  MatrixView<T> base;

  HermitianLowerView() = default;
  explicit HermitianLowerView(MatrixView<T> m) : base(m) {
    if (m.rows() != m.cols()) throw InvalidArgument("Hermitian operand must be square");
  }
  template <class U>
    requires(std::is_same_v<const U, T> && !std::is_same_v<U, T>)
  HermitianLowerView(const HermitianLowerView<U>& other)  // NOLINT(google-explicit-constructor)
      : base(other.base) {}

  index_t dim() const noexcept { return base.rows(); }
};

template <class T>
HermitianLowerView<T> hermitian_lower(MatrixView<T> m) {
  return HermitianLowerView<T>(m);
}
template <class T>
HermitianLowerView<T> hermitian_lower(DenseMatrix<T>& m) {
  return HermitianLowerView<T>(m.view());
}
template <class T>
HermitianLowerView<const T> hermitian_lower(const DenseMatrix<T>& m) {
  return HermitianLowerView<const T>(m.view());
}

/// Lower-triangular operand: strictly-upper entries read as zero, diagonal
/// read as one when `diag == Diag::Unit`.
template <class T>
struct TriangularView {
  ConstMatrixView<T> base;
  Diag diag = Diag::NonUnit;

  TriangularView() = default;
  TriangularView(ConstMatrixView<T> m, Diag d) : base(m), diag(d) {
    if (m.rows() != m.cols()) throw InvalidArgument("triangular operand must be square");
  }

  index_t dim() const noexcept { return base.rows(); }
  bool unit() const noexcept { return diag == Diag::Unit; }
  T diagonal(index_t i) const { return unit() ? T(1) : base(i, i); }
  /// Element of the lower-triangular matrix (zero above the diagonal).
  T at(index_t i, index_t j) const {
    if (i < j) return T(0);
    if (i == j) return diagonal(i);
    return base(i, j);
  }
  TriangularView sub(index_t k, index_t m) const { return TriangularView(base.block(k, k, m, m), diag); }
};

/// Owning lower-triangular factor, e.g. the output of a Cholesky factorization.
template <class T>
struct TriangularFactor {
  DenseMatrix<T> base;
  Diag diag = Diag::NonUnit;

  index_t dim() const noexcept { return base.rows(); }
  TriangularView<T> view() const { return TriangularView<T>(base.view(), diag); }
};

template <class T>
TriangularView<T> lower_triangular(const DenseMatrix<T>& m, Diag d = Diag::NonUnit) {
  return TriangularView<T>(m.view(), d);
}
template <class T>
TriangularView<T> lower_triangular(ConstMatrixView<T> m, Diag d = Diag::NonUnit) {
  return TriangularView<T>(m, d);
}

// ---------------------------------------------------------------------------
// Partitioning

/// One step of the march through the matrix: TL is k x k, the exposed block
/// is kb x kb.
struct PartitionBoundary {
  index_t k = 0;
  index_t kb = 0;
  friend bool operator==(const PartitionBoundary&, const PartitionBoundary&) = default;
};

/// Boundaries 0, b, 2b, ... with kb = min(b, n - k).
inline std::vector<PartitionBoundary> partition_schedule(index_t n, index_t b) {
  if (b < 1) throw InvalidArgument("block size must be at least 1");
  if (n < 0) throw InvalidArgument("matrix dimension must be non-negative");
  std::vector<PartitionBoundary> out;
  for (index_t k = 0; k < n; k += b) out.push_back({k, std::min(b, n - k)});
  return out;
}

template <class T>
struct Quadrants {
  MatrixView<T> tl, tr, bl, br;
};

/// 2x2 split of a square matrix at k; all four pieces alias `m`.
template <class T>
Quadrants<T> quadrant_views(MatrixView<T> m, index_t k) {
  if (m.rows() != m.cols()) throw InvalidArgument("quadrant_views requires a square matrix");
  const index_t n = m.rows();
  if (k < 0 || k > n) throw InvalidArgument("partition index out of range");
  return {m.block(0, 0, k, k), m.block(0, k, k, n - k), m.block(k, 0, n - k, k),
          m.block(k, k, n - k, n - k)};
}

/// The 3x3 repartitioning exposed at boundary (k, kb): index 0 is the
/// finished part, 1 the current block, 2 the remainder.
template <class T>
struct Repartition {
  MatrixView<T> a00, a10, a11, a20, a21, a22;
};

template <class T>
Repartition<T> repartition(MatrixView<T> m, index_t k, index_t kb) {
  const index_t n = m.rows();
  const index_t k2 = k + kb;
  const index_t m2 = n - k2;
  return {m.block(0, 0, k, k),   m.block(k, 0, kb, k),  m.block(k, k, kb, kb),
          m.block(k2, 0, m2, k), m.block(k2, k, m2, kb), m.block(k2, k2, m2, m2)};
}

// ---------------------------------------------------------------------------
// Norms and comparisons

template <class T>
double frobenius_norm(ConstMatrixView<T> m) {
  double s = 0.0;
  for (index_t j = 0; j < m.cols(); ++j)
    for (index_t i = 0; i < m.rows(); ++i) s += abs2(m(i, j));
  return std::sqrt(s);
}

template <class T>
double frobenius_norm(const DenseMatrix<T>& m) {
  return frobenius_norm(m.view());
}

/// Frobenius norm of the lower triangle (diagonal included).
template <class T>
double frobenius_norm_lower(ConstMatrixView<T> m) {
  double s = 0.0;
  for (index_t j = 0; j < m.cols(); ++j)
    for (index_t i = j; i < m.rows(); ++i) s += abs2(m(i, j));
  return std::sqrt(s);
}

/// ||a - b||_F / ||b||_F, falling back to the absolute distance when b = 0.
template <class T>
double relative_distance(ConstMatrixView<T> a, ConstMatrixView<T> b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("shape mismatch");
  double d = 0.0, r = 0.0;
  for (index_t j = 0; j < a.cols(); ++j)
    for (index_t i = 0; i < a.rows(); ++i) {
      d += abs2(a(i, j) - b(i, j));
      r += abs2(b(i, j));
    }
  return r > 0.0 ? std::sqrt(d / r) : std::sqrt(d);
}

/// Same as relative_distance restricted to the lower triangles.
template <class T>
double relative_distance_lower(ConstMatrixView<T> a, ConstMatrixView<T> b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("shape mismatch");
  double d = 0.0, r = 0.0;
  for (index_t j = 0; j < a.cols(); ++j)
    for (index_t i = j; i < a.rows(); ++i) {
      d += abs2(a(i, j) - b(i, j));
      r += abs2(b(i, j));
    }
  return r > 0.0 ? std::sqrt(d / r) : std::sqrt(d);
}

template <class T>
bool bitwise_equal(ConstMatrixView<T> a, ConstMatrixView<T> b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (index_t j = 0; j < a.cols(); ++j)
    if (a.rows() > 0 && std::memcmp(a.col(j), b.col(j), sizeof(T) * a.rows()) != 0) return false;
  return true;
}

template <class T>
bool bitwise_equal_lower(ConstMatrixView<T> a, ConstMatrixView<T> b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (index_t j = 0; j < a.cols(); ++j) {
    const index_t len = a.rows() - j;
    if (len > 0 && std::memcmp(a.col(j) + j, b.col(j) + j, sizeof(T) * len) != 0) return false;
  }
  return true;
}

template <class T>
bool bitwise_equal_strict_upper(ConstMatrixView<T> a, ConstMatrixView<T> b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (index_t j = 1; j < a.cols(); ++j) {
    const index_t len = std::min(j, a.rows());
    if (std::memcmp(a.col(j), b.col(j), sizeof(T) * len) != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Materialization

/// Full Hermitian matrix from the lower triangle; diagonal forced real.
template <class T>
DenseMatrix<std::remove_cv_t<T>> materialize(HermitianLowerView<T> h) {
  using V = std::remove_cv_t<T>;
  const index_t n = h.dim();
  DenseMatrix<V> out(n, n);
  for (index_t j = 0; j < n; ++j) {
    out(j, j) = V(real_of(h.base(j, j)));
    for (index_t i = j + 1; i < n; ++i) {
      out(i, j) = h.base(i, j);
      out(j, i) = conj_of<V>(h.base(i, j));
    }
  }
  return out;
}

/// Dense copy of a triangular operand with explicit zeros (and ones for a
/// unit diagonal).
template <class T>
DenseMatrix<T> materialize(TriangularView<T> l) {
  const index_t n = l.dim();
  DenseMatrix<T> out(n, n);
  for (index_t j = 0; j < n; ++j)
    for (index_t i = j; i < n; ++i) out(i, j) = l.at(i, j);
  return out;
}

template <class T>
DenseMatrix<T> conj_transpose(ConstMatrixView<T> m) {
  DenseMatrix<T> out(m.cols(), m.rows());
  for (index_t j = 0; j < m.cols(); ++j)
    for (index_t i = 0; i < m.rows(); ++i) out(j, i) = conj_of(m(i, j));
  return out;
}

}  // namespace twosided
