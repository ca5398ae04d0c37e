#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

#include "errors.hpp"

namespace supercoh {

// Exact field of coefficients. All structure constants and differentials
// are rational, so nothing is lost relative to R or C.
using Rational = mpq_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

// Always "num/den", as used by the matrix dump format.
inline std::string to_fraction_string(const Rational& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational parse_rational(std::string_view text)
{
    auto parse_int = [&](std::string_view s) {
        if (s.empty()) {
            throw ParseError("empty integer in rational '" + std::string(text) + "'");
        }
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) {
            throw ParseError("malformed rational '" + std::string(text) + "'");
        }
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') {
                throw ParseError("malformed rational '" + std::string(text) + "'");
            }
        }
        mpz_class z;
        z.set_str(std::string(s[0] == '+' ? s.substr(1) : s), 10);
        return z;
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_int(text));
    }
    mpz_class num = parse_int(text.substr(0, slash));
    mpz_class den = parse_int(text.substr(slash + 1));
    if (den == 0) {
        throw ParseError("zero denominator in rational '" + std::string(text) + "'");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

} // namespace supercoh
