#include "twosided/matrix_market.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace twosided {

namespace {

using cplx = std::complex<double>;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '%') continue;
    return true;
  }
  return false;
}

cplx read_value(std::istringstream& ss, MmField field, const std::string& line) {
  double re = 0.0, im = 0.0;
  if (!(ss >> re)) throw MatrixMarketError("bad value in line: " + line);
  if (field == MmField::Complex && !(ss >> im)) throw MatrixMarketError("missing imaginary part in line: " + line);
  return {re, im};
}

void mirror(DenseMatrix<cplx>& m, MmSymmetry sym, index_t i, index_t j, cplx v) {
  m(i, j) = v;
  if (i == j) return;
  switch (sym) {
    case MmSymmetry::General: break;
    case MmSymmetry::Symmetric: m(j, i) = v; break;
    case MmSymmetry::Hermitian: m(j, i) = std::conj(v); break;
    case MmSymmetry::SkewSymmetric: m(j, i) = -v; break;
  }
}

}  // namespace

MatrixMarketData read_matrix_market(std::istream& in) {
  std::string banner;
  if (!std::getline(in, banner)) throw MatrixMarketError("empty input");
  std::istringstream hs(banner);
  std::string tag, object, format, field, symmetry;
  hs >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || lower(object) != "matrix")
    throw MatrixMarketError("missing %%MatrixMarket matrix banner");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);

  MatrixMarketData d;
  if (field == "real" || field == "double") d.field = MmField::Real;
  else if (field == "integer") d.field = MmField::Integer;
  else if (field == "complex") d.field = MmField::Complex;
  else throw MatrixMarketError("unsupported field '" + field + "'");

  if (symmetry == "general") d.symmetry = MmSymmetry::General;
  else if (symmetry == "symmetric") d.symmetry = MmSymmetry::Symmetric;
  else if (symmetry == "hermitian") d.symmetry = MmSymmetry::Hermitian;
  else if (symmetry == "skew-symmetric") d.symmetry = MmSymmetry::SkewSymmetric;
  else throw MatrixMarketError("unsupported symmetry '" + symmetry + "'");

  std::string line;
  if (!next_data_line(in, line)) throw MatrixMarketError("missing size line");
  std::istringstream sz(line);
  long long rows = -1, cols = -1, nnz = -1;
  if (format == "array") {
    if (!(sz >> rows >> cols)) throw MatrixMarketError("bad size line: " + line);
  } else if (format == "coordinate") {
    if (!(sz >> rows >> cols >> nnz)) throw MatrixMarketError("bad size line: " + line);
  } else {
    throw MatrixMarketError("unsupported format '" + format + "'");
  }
  if (rows < 0 || cols < 0 || nnz < -1) throw MatrixMarketError("negative dimension");
  if (d.symmetry != MmSymmetry::General && rows != cols)
    throw MatrixMarketError("symmetric storage requires a square matrix");
  d.values = DenseMatrix<cplx>(rows, cols);

  if (format == "array") {
    for (index_t j = 0; j < cols; ++j) {
      const index_t i0 = d.symmetry == MmSymmetry::General ? 0 : (d.symmetry == MmSymmetry::SkewSymmetric ? j + 1 : j);
      for (index_t i = i0; i < rows; ++i) {
        if (!next_data_line(in, line)) throw MatrixMarketError("unexpected end of array data");
        std::istringstream ss(line);
        mirror(d.values, d.symmetry, i, j, read_value(ss, d.field, line));
      }
    }
  } else {
    for (long long e = 0; e < nnz; ++e) {
      if (!next_data_line(in, line)) throw MatrixMarketError("unexpected end of coordinate data");
      std::istringstream ss(line);
      long long i = 0, j = 0;
      if (!(ss >> i >> j)) throw MatrixMarketError("bad entry: " + line);
      if (i < 1 || i > rows || j < 1 || j > cols) throw MatrixMarketError("index out of range: " + line);
      mirror(d.values, d.symmetry, i - 1, j - 1, read_value(ss, d.field, line));
    }
  }
  return d;
}

MatrixMarketData read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MatrixMarketError("cannot open '" + path + "'");
  return read_matrix_market(in);
}

DenseMatrix<double> real_part_checked(const MatrixMarketData& d) {
  if (d.is_complex()) throw MatrixMarketError("complex data where a real matrix is required");
  DenseMatrix<double> out(d.values.rows(), d.values.cols());
  for (index_t j = 0; j < out.cols(); ++j)
    for (index_t i = 0; i < out.rows(); ++i) out(i, j) = d.values(i, j).real();
  return out;
}

namespace {

std::string format_value(double v) { return fmt::format("{:.17g}", v); }
std::string format_value(cplx v) { return fmt::format("{:.17g} {:.17g}", v.real(), v.imag()); }

template <class T>
void write_array(std::ostream& out, ConstMatrixView<T> m, bool lower_only) {
  if (lower_only && m.rows() != m.cols()) throw InvalidArgument("lower-triangle output needs a square matrix");
  const char* field = is_complex_v<T> ? "complex" : "real";
  const char* sym = !lower_only ? "general" : (is_complex_v<T> ? "hermitian" : "symmetric");
  out << "%%MatrixMarket matrix array " << field << ' ' << sym << '\n';
  out << m.rows() << ' ' << m.cols() << '\n';
  for (index_t j = 0; j < m.cols(); ++j)
    for (index_t i = lower_only ? j : 0; i < m.rows(); ++i) {
      T v = m(i, j);
      if (lower_only && i == j) v = T(real_of(v));
      out << format_value(v) << '\n';
    }
}

}  // namespace

void write_matrix_market(std::ostream& out, ConstMatrixView<double> m, bool lower_only) {
  write_array(out, m, lower_only);
}

void write_matrix_market(std::ostream& out, ConstMatrixView<cplx> m, bool lower_only) {
  write_array(out, m, lower_only);
}

template <class T>
void write_matrix_market_file(const std::string& path, ConstMatrixView<T> m, bool lower_only) {
  std::ofstream out(path);
  if (!out) throw MatrixMarketError("cannot write '" + path + "'");
  write_matrix_market(out, m, lower_only);
  if (!out) throw MatrixMarketError("write to '" + path + "' failed");
}

template void write_matrix_market_file<double>(const std::string&, ConstMatrixView<double>, bool);
template void write_matrix_market_file<cplx>(const std::string&, ConstMatrixView<cplx>, bool);

}  // namespace twosided
