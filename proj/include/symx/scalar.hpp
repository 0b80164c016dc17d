#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace symx {

using Complex = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;

/// Scalar-ring hooks shared by the generic polynomial/matrix code.
/// Specializations exist for Complex, Rational, and (in poly.hpp) for
/// polynomials themselves, so polynomial coefficients can be polynomials.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
    static Complex zero() { return Complex(0.0, 0.0); }
    static Complex one() { return Complex(1.0, 0.0); }
    static bool is_zero(const Complex& c) { return c == zero(); }
    static Complex from_int(std::int64_t v) { return Complex(double(v), 0.0); }
    static constexpr bool exact = false;
};

template <>
struct ScalarTraits<Rational> {
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static bool is_zero(const Rational& c) { return c == 0; }
    static Rational from_int(std::int64_t v) { return Rational(v); }
    static constexpr bool exact = true;
};

template <>
struct ScalarTraits<double> {
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static bool is_zero(double c) { return c == 0.0; }
    static double from_int(std::int64_t v) { return double(v); }
    static constexpr bool exact = false;
};

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

/// Magnitude used for reporting and tolerance checks.
inline double scalar_abs(const Complex& c) { return std::abs(c); }
inline double scalar_abs(const Rational& q) { return std::abs(to_double(q)); }
inline double scalar_abs(double x) { return std::abs(x); }

/// Lossless-enough conversions between the scalar rings we actually mix:
/// rational data promoted to complex, and reals promoted to complex.
inline Complex to_complex(const Complex& c) { return c; }
inline Complex to_complex(const Rational& q) { return Complex(to_double(q), 0.0); }
inline Complex to_complex(double x) { return Complex(x, 0.0); }

}  // namespace symx
