#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>

#include "gapbench/errors.hpp"

namespace gapbench {

// Exact rational arithmetic for zero-tolerance checks.  Every double is a
// dyadic rational, so converting the stored edge weights with
// rational_from_double makes all downstream exact-mode computations exact
// for the instance as given.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw WeightOutOfRange("non-finite weight");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
    std::int64_t m = static_cast<std::int64_t>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r(m);
    if (exp > 0) {
        r *= Rational(BigInt(1) << exp);
    } else if (exp < 0) {
        r /= Rational(BigInt(1) << (-exp));
    }
    return r;
}

inline Rational rational_pow(Rational base, int exp) {
    Rational r(1);
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Numeric abstraction used by the exact engines; instantiated for double and
// for Rational.
template <class Num>
struct NumOps;

template <>
struct NumOps<double> {
    static double from_double(double x) { return x; }
    static double from_int(std::int64_t x) { return static_cast<double>(x); }
    static double to_double(double x) { return x; }
    static constexpr double tie_tolerance() { return 1e-9; }
};

template <>
struct NumOps<Rational> {
    static Rational from_double(double x) { return rational_from_double(x); }
    static Rational from_int(std::int64_t x) { return Rational(x); }
    static double to_double(const Rational& x) { return static_cast<double>(x); }
    static Rational tie_tolerance() { return Rational(0); }
};

}  // namespace gapbench
