#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <type_traits>

namespace valgebra {

/// Exact rational scalar used by the kernel's exact arithmetic mode.
using Rational = boost::multiprecision::mpq_rational;

// Scalar traits: the kernel is templated on the coordinate scalar, either
// `double` (fast mode) or `Rational` (exact mode). A computation never mixes
// the two; choosing the instantiation chooses the mode.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double from_long(long v) { return static_cast<double>(v); }
    static double from_ratio(long num, long den) { return static_cast<double>(num) / static_cast<double>(den); }
    static double to_double(double v) { return v; }
    static double abs(double v) { return std::fabs(v); }
    static std::string to_string(double v);
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational from_long(long v) { return Rational(v); }
    static Rational from_ratio(long num, long den) { return Rational(num, den); }
    static double to_double(const Rational& v) { return v.convert_to<double>(); }
    static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
    static std::string to_string(const Rational& v) { return v.str(); }
};

template <class S>
double to_double(const S& v) { return scalar_traits<S>::to_double(v); }

template <class S>
S scalar_abs(const S& v) { return scalar_traits<S>::abs(v); }

inline std::string scalar_traits<double>::to_string(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Rounds a double to a nearby rational with denominator at most `max_den`
/// (continued-fraction convergents). Used when exact mode needs numeric
/// constants such as polygon coordinates.
inline Rational rationalize(double x, std::int64_t max_den = (1LL << 31)) {
    if (x == 0.0) return Rational(0);
    bool neg = x < 0;
    double v = neg ? -x : x;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = v;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(frac);
        if (fl > 9e17) break;
        std::int64_t a = static_cast<std::int64_t>(fl);
        std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den || q2 <= 0) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double rem = frac - fl;
        if (rem < 1e-18) break;
        frac = 1.0 / rem;
    }
    Rational r(p1, q1);
    return neg ? Rational(-r) : r;
}

// Tolerance used by predicate tests in float mode; exact mode ignores it.
template <class S>
struct mode_eps {
    static S visibility(const S& scale) {
        if constexpr (scalar_traits<S>::exact) {
            (void)scale;
            return S(0);
        } else {
            return S(1e-11) * (scale < S(1) ? S(1) : scale);
        }
    }
};

} // namespace valgebra
