#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace relhom {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string rational_str(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "3", "-4", "3/2".
Rational parse_rational(const std::string& text);

} // namespace relhom
