#pragma once

#include <complex>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace twosided {

using index_t = std::ptrdiff_t;

template <class T>
struct is_complex : std::false_type {};
template <class R>
struct is_complex<std::complex<R>> : std::true_type {};

template <class T>
inline constexpr bool is_complex_v = is_complex<std::remove_cv_t<T>>::value;

template <class T>
struct real_type {
  using type = T;
};
template <class R>
struct real_type<std::complex<R>> {
  using type = R;
};

template <class T>
using real_t = typename real_type<std::remove_cv_t<T>>::type;

/// The two supported element fields.
template <class T>
concept Field = std::same_as<T, double> || std::same_as<T, std::complex<double>>;

/// Conjugation; identity for real scalars.
template <class T>
constexpr T conj_of(const T& x) {
  if constexpr (is_complex_v<T>) {
    return std::conj(x);
  } else {
    return x;
  }
}

template <class T>
constexpr real_t<T> real_of(const T& x) {
  if constexpr (is_complex_v<T>) {
    return x.real();
  } else {
    return x;
  }
}

/// Squared magnitude |x|^2.
template <class T>
constexpr real_t<T> abs2(const T& x) {
  if constexpr (is_complex_v<T>) {
    return x.real() * x.real() + x.imag() * x.imag();
  } else {
    return x * x;
  }
}

enum class Op { NoTrans, Trans, ConjTrans };
enum class Side { Left, Right };
enum class Diag { NonUnit, Unit };

/// Bad shapes, out-of-range indices, unknown names.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A triangular operand with a zero diagonal entry.
class SingularFactor : public std::runtime_error {
 public:
  explicit SingularFactor(index_t index)
      : std::runtime_error("singular triangular factor: zero diagonal at index " +
                           std::to_string(index)),
        index_(index) {}
  index_t index() const noexcept { return index_; }

 private:
  index_t index_;
};

/// Cholesky met a non-positive pivot.
class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(index_t index)
      : std::runtime_error("matrix is not positive definite: non-positive pivot at index " +
                           std::to_string(index)),
        index_(index) {}
  index_t index() const noexcept { return index_; }

 private:
  index_t index_;
};

}  // namespace twosided
