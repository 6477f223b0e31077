#pragma once

#include <complex>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace spherex {

/// Exact rational scalar used for identity checks (no expression templates so
/// it behaves like a plain value type inside Eigen and std containers).
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <class T>
inline constexpr bool is_complex_v = false;
template <class T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

template <class T>
double to_double(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return v.template convert_to<double>();
  } else {
    return static_cast<double>(v);
  }
}

/// Real scalars become double, complex stay complex<double>.
template <class T>
auto to_double_any(const T& v) {
  if constexpr (is_complex_v<T>) {
    return std::complex<double>(v);
  } else {
    return to_double(v);
  }
}

/// Converts a coefficient of type From into the arithmetic type To used for
/// evaluation (double -> complex, Rational -> double, identity, ...).
template <class To, class From>
To scalar_cast(const From& v) {
  if constexpr (std::is_same_v<To, From>) {
    return v;
  } else if constexpr (is_complex_v<To>) {
    return To(to_double(v), 0.0);
  } else if constexpr (std::is_same_v<To, Rational>) {
    static_assert(!std::is_same_v<From, std::complex<double>>, "complex to rational");
    return Rational(v);
  } else {
    return static_cast<To>(to_double(v));
  }
}

}  // namespace spherex
