#pragma once
// Outward-rounded float64 intervals: the fast certified backend.  Basic
// arithmetic runs in round-to-nearest and then widens the result by one ulp
// on each side, which encloses the correctly-rounded result without touching
// the FPU rounding mode.  ln/exp/sqrt and rational/bigint conversions go
// through MPFR at 53 bits with directed rounding, so those bounds are tight.
//
// Contract: for any operation, the true real-valued result of the same
// operation on any reals contained in the operands lies in the result.
// Invalid domains (log of a nonpositive interval, division by an interval
// containing 0) throw; NaN is never produced.

#include <gmpxx.h>
#include <cmath>
#include <stdexcept>
#include <string>

namespace conc {

inline double ulp_down(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double ulp_up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    explicit Interval(double x) : lo(x), hi(x) {}
    Interval(double l, double h) : lo(l), hi(h) {
        if (!(l <= h)) throw std::invalid_argument("interval bounds out of order");
    }

    static Interval from_rational(const mpq_class& q);  // outward, MPFR-tight
    static Interval from_integer(const mpz_class& z);

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const mpq_class& q) const;
    bool is_point() const { return lo == hi; }

    Interval operator-() const { return Interval(-hi, -lo); }
    Interval& operator+=(const Interval& o) { return *this = *this + o; }
    Interval& operator-=(const Interval& o) { return *this = *this - o; }
    Interval& operator*=(const Interval& o) { return *this = *this * o; }
    Interval& operator/=(const Interval& o) { return *this = *this / o; }

    friend Interval operator+(const Interval& a, const Interval& b) {
        return Interval(ulp_down(a.lo + b.lo), ulp_up(a.hi + b.hi));
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        return Interval(ulp_down(a.lo - b.hi), ulp_up(a.hi - b.lo));
    }
    friend Interval operator*(const Interval& a, const Interval& b);
    friend Interval operator/(const Interval& a, const Interval& b);

    std::string str() const;
};

// Correctly-rounded enclosures via MPFR (53-bit, directed).
Interval log(const Interval& x);   // requires x.lo > 0
Interval exp(const Interval& x);
Interval sqrt(const Interval& x);  // requires x.lo >= 0
Interval pow_int(const Interval& x, long e);

// Lower bound of -1/e rounded down and up (the min of t*ln t on (0,1]).
Interval neg_inv_e();

}  // namespace conc
