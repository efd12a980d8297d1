#pragma once

// Floating types shared by the numeric paths: IEEE double and a 50-digit
// binary float for the small-radius work where R = K - 1/z cancels.

#include <complex>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "freemoments/rational.hpp"

namespace freemoments {

using Extended = boost::multiprecision::cpp_bin_float_50;
using ExtendedComplex = boost::multiprecision::cpp_complex_50;

template <class Real>
struct complex_of;
template <>
struct complex_of<double> {
  using type = std::complex<double>;
};
template <>
struct complex_of<Extended> {
  using type = ExtendedComplex;
};
template <class Real>
using complex_t = typename complex_of<Real>::type;

template <class Real>
Real to_real(const Rational& q) {
  if constexpr (std::is_same_v<Real, double>) {
    return q.get_d();
  } else {
    return Real(q.get_num().get_str()) / Real(q.get_den().get_str());
  }
}

inline ExtendedComplex to_extended(const std::complex<double>& z) { return {Extended(z.real()), Extended(z.imag())}; }

inline std::complex<double> to_double(const ExtendedComplex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

/// Working precision: double, or 50 significant digits.
enum class Precision { double_precision, extended };

}  // namespace freemoments
