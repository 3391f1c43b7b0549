/**
 * @file rational.hpp
 * @brief Exact rational scalar type used throughout the library.
 *
 * All symbolic computation is done over arbitrary-precision rationals so that
 * every identity check is exact; doubles appear only at the numerical
 * integration boundary (numeric.hpp).
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace viete {

using Rational = boost::multiprecision::cpp_rational;
using Integer  = boost::multiprecision::cpp_int;

/// q^e for integer e (e < 0 requires q != 0).
inline Rational rat_pow(const Rational& q, long e) {
    if (e == 0) return Rational(1);
    Rational base = q;
    bool inv = e < 0;
    if (inv) {
        if (q == 0) throw std::domain_error("rat_pow: 0 to negative power");
        base = Rational(1) / q;
        e = -e;
    }
    Rational out(1);
    while (e > 0) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

/// Parse "num", "-num", or "num/den" (either sign on either part).
inline Rational rat_parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Integer(s));
    Integer num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) throw std::domain_error("rat_parse: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(num, den);
}

inline std::string rat_str(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline double rat_double(const Rational& q) { return q.convert_to<double>(); }

} // namespace viete
