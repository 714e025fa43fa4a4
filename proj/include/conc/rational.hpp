#pragma once
// Exact rational arithmetic is the truth backend everywhere: gmpxx's
// mpq_class already gives canonical lowest-terms fractions with den > 0,
// so Rational is an alias plus a few parsing/printing helpers.

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace conc {

using Rational = mpq_class;
using Integer = mpz_class;

// Parse "a/b", "a", or a decimal like "5.05" into an exact rational.
// Decimal input maps to digits/10^k, no binary rounding ever happens.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rational q;
        if (q.set_str(text, 10) != 0)
            throw std::invalid_argument("bad rational literal: " + text);
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
        q.canonicalize();
        return q;
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) {
        Integer z;
        if (z.set_str(text, 10) != 0)
            throw std::invalid_argument("bad integer literal: " + text);
        return Rational(z);
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    bool neg = false;
    if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
        neg = digits[0] == '-';
        digits = digits.substr(1);
    }
    if (digits.empty()) throw std::invalid_argument("bad decimal literal: " + text);
    Integer num;
    if (num.set_str(digits, 10) != 0)
        throw std::invalid_argument("bad decimal literal: " + text);
    Integer den = 1;
    for (size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    Rational q(neg ? Integer(-num) : num, den);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace conc
