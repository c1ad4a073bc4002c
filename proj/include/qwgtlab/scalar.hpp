#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>

#include "qwgtlab/errors.hpp"

namespace qwgtlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

/// Scalar field plug points. Every evaluation path is templated on one of
/// Rational (never rounds), double, or Complex; the traits keep the inner
/// loops free of runtime branching on the scalar kind.
template <class S>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
    static constexpr bool exact = true;
    using Magnitude = Rational;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_int(long v) { return Rational(v); }
    static Rational magnitude(const Rational& v) { return v < 0 ? Rational(-v) : v; }
    static bool close(const Rational& a, const Rational& b) { return a == b; }
};

template <>
struct ScalarOps<double> {
    static constexpr bool exact = false;
    using Magnitude = double;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(long v) { return static_cast<double>(v); }
    static double magnitude(double v) { return std::abs(v); }
    static bool close(double a, double b, double rel = 1e-12) {
        return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1.0});
    }
};

template <>
struct ScalarOps<Complex> {
    static constexpr bool exact = false;
    using Magnitude = double;
    static Complex zero() { return {0.0, 0.0}; }
    static Complex one() { return {1.0, 0.0}; }
    static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
    static double magnitude(const Complex& v) { return std::abs(v); }
    static bool close(const Complex& a, const Complex& b, double rel = 1e-12) {
        return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1.0});
    }
};

template <class S>
S pow_int(S base, std::size_t e) {
    S out = static_cast<S>(1);
    while (e) {
        if (e & 1)
            out = out * base;
        base = base * base;
        e >>= 1;
    }
    return out;
}

/// |a - b| / max(|a|, |b|, 1), the discrepancy measure used in reports.
template <class S>
double relative_discrepancy(const S& a, const S& b) {
    double ma, mb, d;
    if constexpr (ScalarOps<S>::exact) {
        Rational diff = ScalarOps<Rational>::magnitude(a - b);
        Rational den = std::max({ScalarOps<Rational>::magnitude(a),
                                 ScalarOps<Rational>::magnitude(b), Rational(1)});
        return static_cast<double>(Rational(diff / den));
    } else {
        ma = ScalarOps<S>::magnitude(a);
        mb = ScalarOps<S>::magnitude(b);
        d = ScalarOps<S>::magnitude(a - b);
        return d / std::max({ma, mb, 1.0});
    }
}

/// Exact rational square root; throws DomainError when r has no rational root.
Rational sqrt_exact(const Rational& r);

/// base^(k/2) staying in the rational field: even k is a plain power, odd k
/// factors out sqrt_exact(base).
Rational pow_half_exact(const Rational& base, std::size_t k);

// --- scalar literals -------------------------------------------------------
// Values cross the process boundary as strings ("p/q", decimal, or a
// {"re","im"} pair handled at the JSON layer) so no precision is lost to
// JSON number parsing.

Rational parse_rational(const std::string& text);
double parse_double(const std::string& text);

std::string format_scalar(const Rational& v); // "p/q", or "n" when integral
std::string format_scalar(double v);          // shortest round-trip decimal

} // namespace qwgtlab
