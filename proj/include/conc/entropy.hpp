#pragma once
// The exponential-scale surrogates for log-binomials: g(x) = x*ln x with
// g(0) = 0, and h(x,y) = g(x) - g(y) - g(x-y).  h is homogeneous of degree 1
// and ln C(n,m) = h(n,m) + O(ln n); the sandwich
//   exp(h(n,m)) / (5 sqrt(n)) <= C(n,m) <= exp(h(n,m))
// is the bridge between exact counting and the continuous optimization.
// All three numeric backends get overloads: float64 for exploration,
// Interval / WideInterval for certified bounds.

#include <gmpxx.h>
#include <cmath>
#include <stdexcept>

#include "conc/extended.hpp"
#include "conc/interval.hpp"

namespace conc {

inline double g(double x) {
    if (x < 0) throw std::domain_error("g: negative argument");
    return x == 0.0 ? 0.0 : x * std::log(x);
}

Interval g(const Interval& x);
WideInterval g(const WideInterval& x);

inline double h(double x, double y) {
    if (y < 0 || y > x) throw std::domain_error("h: need 0 <= y <= x");
    return g(x) - g(y) - g(x - y);
}

template <class T>
T h(const T& x, const T& y) {
    // Interval flavors: the difference must stay provably nonnegative.
    T d = x - y;
    return g(x) - g(y) - g(d);
}

// h over wide intervals built from exact rationals; the workhorse for the
// closed-form constant certifications.
inline WideInterval h_wide(const mpq_class& x, const mpq_class& y) {
    return h(WideInterval(x), WideInterval(y));
}

struct StirlingSandwich {
    double lower = 0;   // certified lower bound exp(h)/(5 sqrt n), rounded down
    double upper = 0;   // certified upper bound exp(h), rounded up
    mpz_class value;    // exact C(n,m)
};

// Computes the sandwich and throws std::logic_error if the exact binomial
// escapes it (which would mean a bug in h or binom, not bad luck).
StirlingSandwich stirling_sandwich(long n, long m);

}  // namespace conc
