#pragma once

#include <gtest/gtest.h>

#include <complex>

#include "twosided/matrix.hpp"

namespace twosided::test {

using cplx = std::complex<double>;
using Fields = ::testing::Types<double, cplx>;

/// Fills the strictly-upper triangle with a recognizable pattern.
template <class T>
void poison_upper(DenseMatrix<T>& m) {
  for (index_t j = 1; j < m.cols(); ++j)
    for (index_t i = 0; i < j && i < m.rows(); ++i) m(i, j) = T(1e30 + static_cast<double>(i * 7 + j));
}

template <class T>
T scalar(double re, double im = 0.0) {
  if constexpr (is_complex_v<T>) {
    return T(re, im);
  } else {
    return re;
  }
}

}  // namespace twosided::test
