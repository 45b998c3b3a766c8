#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "gim/errors.hpp"

namespace gim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses "p/q" or "p" with an optional leading sign. Rejects q = 0.
inline Rational parse_rational(const std::string& text) {
    auto bad = [&]() -> BigInt { throw ParseError("invalid rational literal: '" + text + "'"); };
    auto integer = [&](const std::string& s) -> BigInt {
        size_t i = 0;
        bool negative = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
        if (i >= s.size()) return bad();
        for (size_t j = i; j < s.size(); ++j)
            if (s[j] < '0' || s[j] > '9') return bad();
        while (i + 1 < s.size() && s[i] == '0') ++i;  // decimal, never octal
        BigInt v(s.substr(i));
        return negative ? BigInt(-v) : v;
    };
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(integer(text));
    BigInt num = integer(text.substr(0, slash));
    BigInt den = integer(text.substr(slash + 1));
    if (den == 0) bad();
    return Rational(num, den);
}

inline std::string rational_to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace gim
