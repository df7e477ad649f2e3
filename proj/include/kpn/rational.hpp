#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace kpn {

/// Exact arbitrary-precision rational. All bound computations and reported
/// rates use this type; no floating point enters the LP or the certificates.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Renders a rational as "a/b" in lowest terms, denominator always present
/// ("1/1", "-3/5"). This is the wire format for every JSON report.
inline std::string to_fraction(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational make_rational(std::int64_t num, std::int64_t den) {
    return Rational(num, den);
}

} // namespace kpn
