#pragma once

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "twosided/matrix.hpp"

namespace twosided {

/// Malformed or unreadable Matrix Market input.
class MatrixMarketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MmField { Real, Integer, Complex };
enum class MmSymmetry { General, Symmetric, Hermitian, SkewSymmetric };

/// Dense contents of a Matrix Market file. Symmetric, Hermitian and
/// skew-symmetric inputs are expanded to both triangles.
struct MatrixMarketData {
  MmField field = MmField::Real;
  MmSymmetry symmetry = MmSymmetry::General;
  DenseMatrix<std::complex<double>> values;

  bool is_complex() const { return field == MmField::Complex; }
};

/// Accepts `array` and `coordinate` layouts, real/integer/complex fields.
MatrixMarketData read_matrix_market(std::istream& in);
MatrixMarketData read_matrix_market_file(const std::string& path);

/// Real view of the data; throws MatrixMarketError for complex files.
DenseMatrix<double> real_part_checked(const MatrixMarketData& d);

/// `array` format. With `lower_only` the lower triangle is written under a
/// `symmetric` (real) or `hermitian` (complex) banner.
void write_matrix_market(std::ostream& out, ConstMatrixView<double> m, bool lower_only = false);
void write_matrix_market(std::ostream& out, ConstMatrixView<std::complex<double>> m, bool lower_only = false);

template <class T>
void write_matrix_market_file(const std::string& path, ConstMatrixView<T> m, bool lower_only = false);

}  // namespace twosided
