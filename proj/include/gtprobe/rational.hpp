#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace gtprobe {

/// Arbitrary-precision integer.
using BigInt = boost::multiprecision::cpp_int;

/// Exact rational, always kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

/// p/q in lowest terms. Boost 1.74 rejects a negative denominator in the
/// two-argument constructor, so the sign is moved to the numerator first.
inline Rational ratio(BigInt p, BigInt q) {
    if (q == 0) throw std::domain_error("ratio: zero denominator");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    return Rational(p, q);
}

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const BigInt& v) { return v.convert_to<double>(); }

/// Exact value of a finite double (every finite double is a dyadic rational).
inline Rational exact_rational(double x) { return Rational(x); }

/// "p/q", or "p" when q == 1.
inline std::string to_string(const Rational& r) {
    if (den(r) == 1) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

inline std::string to_string(const BigInt& v) { return v.str(); }

/// Square root of a nonnegative rational when it is itself rational.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
    if (r < 0) return std::nullopt;
    const BigInt p = num(r), q = den(r);
    const BigInt sp = boost::multiprecision::sqrt(p);
    const BigInt sq = boost::multiprecision::sqrt(q);
    if (sp * sp != p || sq * sq != q) return std::nullopt;
    return Rational(sp, sq);
}

inline BigInt factorial(int n) {
    BigInt out = 1;
    for (int k = 2; k <= n; ++k) out *= k;
    return out;
}

}  // namespace gtprobe
